#include "robotval/logic/world.hpp"

#include <utility>

#include "robotval/errors.hpp"

namespace robotval::logic {

namespace {

using Env = std::vector<std::pair<std::string, ObjectId>>;

const ObjectId& resolve(const Term& t, const Env& env) {
  if (t.isConstant()) return t.name();
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == t.name()) return it->second;
  throw ModelError("free variable " + t.name() + " during evaluation");
}

std::vector<ObjectId> resolveAll(const std::vector<Term>& terms, const Env& env) {
  std::vector<ObjectId> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(resolve(t, env));
  return out;
}

Situation resolveSituation(const Situation& s, const Env& env) {
  if (!s.isDo()) return s;
  std::vector<Term> args;
  bool changed = false;
  for (const auto& t : s.action().args) {
    if (t.isVariable()) {
      args.push_back(Term::constant(resolve(t, env)));
      changed = true;
    } else {
      args.push_back(t);
    }
  }
  Situation pred = resolveSituation(s.predecessor(), env);
  if (!changed && pred == s.predecessor()) return s;
  return Situation::doing(Action{s.action().name, std::move(args)}, std::move(pred));
}

Truth fromBool(bool b) { return b ? Truth::True : Truth::False; }

Truth negate(Truth t) {
  switch (t) {
    case Truth::True: return Truth::False;
    case Truth::False: return Truth::True;
    default: return Truth::Unknown;
  }
}

template <class Leaf>
class Evaluator {
 public:
  Evaluator(const DomainProvider& domains, const Leaf& leaf, Env env = {})
      : domains_(domains), leaf_(leaf), env_(std::move(env)) {}

  Truth run(const Formula& phi) {
    switch (phi.kind()) {
      case FormulaKind::True: return Truth::True;
      case FormulaKind::False: return Truth::False;
      case FormulaKind::Rigid: return leaf_.rigid(phi.symbol(), resolveAll(phi.terms(), env_));
      case FormulaKind::Fluent:
        return leaf_.fluent(phi.symbol(), resolveAll(phi.terms(), env_), resolveSituation(phi.situation(), env_));
      case FormulaKind::Equal: return fromBool(resolve(phi.terms()[0], env_) == resolve(phi.terms()[1], env_));
      case FormulaKind::ActionEq:
        throw ModelError("action equality on " + phi.symbol() + " evaluated without a bound action");
      case FormulaKind::Not: return negate(run(phi.child(0)));
      case FormulaKind::And: {
        Truth a = run(phi.child(0));
        if (a == Truth::False) return a;
        Truth b = run(phi.child(1));
        if (b == Truth::False) return b;
        return (a == Truth::True && b == Truth::True) ? Truth::True : Truth::Unknown;
      }
      case FormulaKind::Or: {
        Truth a = run(phi.child(0));
        if (a == Truth::True) return a;
        Truth b = run(phi.child(1));
        if (b == Truth::True) return b;
        return (a == Truth::False && b == Truth::False) ? Truth::False : Truth::Unknown;
      }
      case FormulaKind::Implies: {
        Truth a = run(phi.child(0));
        if (a == Truth::False) return Truth::True;
        Truth b = run(phi.child(1));
        if (b == Truth::True) return Truth::True;
        return (a == Truth::True && b == Truth::False) ? Truth::False : Truth::Unknown;
      }
      case FormulaKind::Iff: {
        Truth a = run(phi.child(0));
        Truth b = run(phi.child(1));
        if (a == Truth::Unknown || b == Truth::Unknown) return Truth::Unknown;
        return fromBool(a == b);
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        // Finite expansion: disjunction (exists) or conjunction (forall) over the domain.
        const bool isExists = phi.kind() == FormulaKind::Exists;
        const Truth decisive = isExists ? Truth::True : Truth::False;
        bool unknown = false;
        for (const auto& c : domains_.domain(phi.sort())) {
          env_.emplace_back(phi.symbol(), c);
          Truth t = run(phi.body());
          env_.pop_back();
          if (t == decisive) return t;
          unknown = unknown || t == Truth::Unknown;
        }
        if (unknown) return Truth::Unknown;
        return isExists ? Truth::False : Truth::True;
      }
    }
    return Truth::Unknown;
  }

 private:
  const DomainProvider& domains_;
  const Leaf& leaf_;
  Env env_;
};

struct TotalLeaf {
  const Interpretation& w;
  Truth rigid(const std::string& n, const std::vector<ObjectId>& a) const { return fromBool(w.rigid(n, a)); }
  Truth fluent(const std::string& n, const std::vector<ObjectId>& a, const Situation& s) const {
    return fromBool(w.fluent(n, a, s));
  }
};

struct PartialLeaf {
  const PartialInterpretation& w;
  static Truth lift(std::optional<bool> v) { return v ? fromBool(*v) : Truth::Unknown; }
  Truth rigid(const std::string& n, const std::vector<ObjectId>& a) const { return lift(w.rigid(n, a)); }
  Truth fluent(const std::string& n, const std::vector<ObjectId>& a, const Situation& s) const {
    return lift(w.fluent(n, a, s));
  }
};

std::string atomText(const std::string& name, std::span<const ObjectId> args) {
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
  return out + ")";
}

}  // namespace

bool evaluate(const Interpretation& w, const Formula& phi) {
  TotalLeaf leaf{w};
  Evaluator<TotalLeaf> ev(w, leaf);
  return ev.run(phi) == Truth::True;
}

bool evaluate(const Interpretation& w, const Formula& phi, const Bindings& bindings) {
  TotalLeaf leaf{w};
  Evaluator<TotalLeaf> ev(w, leaf, bindings);
  return ev.run(phi) == Truth::True;
}

Truth evaluatePartial(const PartialInterpretation& w, const Formula& phi) {
  PartialLeaf leaf{w};
  Evaluator<PartialLeaf> ev(w, leaf);
  return ev.run(phi);
}

bool checkAxioms(const Interpretation& w, std::span<const Formula> axioms, const Situation& s) {
  for (const auto& axiom : axioms) {
    Formula grounded = axiom;
    for (const auto& v : situationVariables(axiom)) grounded = substitute(grounded, v, s);
    if (!evaluate(w, grounded)) return false;
  }
  return true;
}

World::World(std::map<std::string, std::vector<ObjectId>> sorts) : sorts_(std::move(sorts)) {}

void World::setRigid(const GroundAtom& atom, bool value) { rigid_[atom] = value; }

void World::setFluent(const GroundAtom& atom, const Situation& situation, bool value) {
  if (!situation.ground()) throw TotalityError("fluent truths can only be stored for ground situations");
  fluents_[situation][atom] = value;
}

const std::vector<ObjectId>& World::domain(const std::string& sort) const {
  auto it = sorts_.find(sort);
  if (it == sorts_.end()) throw ModelError("unknown sort " + sort);
  return it->second;
}

bool World::rigid(const std::string& name, std::span<const ObjectId> args) const {
  auto it = rigid_.find(GroundAtom{name, {args.begin(), args.end()}});
  if (it == rigid_.end()) throw TotalityError("no truth value for rigid atom " + atomText(name, args));
  return it->second;
}

bool World::fluent(const std::string& name, std::span<const ObjectId> args, const Situation& situation) const {
  if (!situation.ground()) throw TotalityError("fluent " + name + " queried at a non-ground situation");
  auto s = fluents_.find(situation);
  if (s == fluents_.end()) throw TotalityError("situation of " + atomText(name, args) + " is not populated");
  auto it = s->second.find(GroundAtom{name, {args.begin(), args.end()}});
  if (it == s->second.end()) throw TotalityError("no truth value for fluent atom " + atomText(name, args));
  return it->second;
}

}  // namespace robotval::logic
