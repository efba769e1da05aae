#include "robotval/action/theory.hpp"

#include <algorithm>
#include <utility>

#include "robotval/errors.hpp"

namespace robotval::action {

using logic::FormulaKind;
using logic::Situation;
using logic::Term;

namespace {

void forEachAtom(const Formula& phi, const std::function<void(const Formula&)>& fn) {
  if (phi.isAtom()) {
    fn(phi);
    return;
  }
  for (std::size_t i = 0; i < phi.arity(); ++i) forEachAtom(phi.child(i), fn);
}

std::string joinArgs(std::span<const ObjectId> args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
  return out;
}

}  // namespace

AtomLayout::AtomLayout(std::vector<ObjectId> objects, const std::vector<PredicateDecl>& families)
    : objects_(std::move(objects)) {
  for (std::size_t i = 0; i < objects_.size(); ++i) objectIndex_[objects_[i]] = i;
  for (const auto& p : families) {
    std::size_t count = 1;
    for (std::size_t k = 0; k < p.arity; ++k) count *= objects_.size();
    families_.push_back(Family{p.name, p.arity, size_, count});
    size_ += count;
  }
}

const AtomLayout::Family* AtomLayout::find(const std::string& name) const {
  for (const auto& f : families_)
    if (f.name == name) return &f;
  return nullptr;
}

std::size_t AtomLayout::index(const std::string& name, std::span<const ObjectId> args) const {
  const Family* f = find(name);
  if (f == nullptr) throw ModelError("unknown fluent " + name);
  if (args.size() != f->arity) throw ModelError("fluent " + name + " expects " + std::to_string(f->arity) + " arguments");
  std::size_t idx = 0;
  for (const auto& a : args) {
    auto it = objectIndex_.find(a);
    if (it == objectIndex_.end()) throw ModelError("unknown object " + a);
    idx = idx * objects_.size() + it->second;
  }
  return f->offset + idx;
}

GroundAtom AtomLayout::atom(std::size_t index) const {
  for (const auto& f : families_) {
    if (index < f.offset || index >= f.offset + f.count) continue;
    std::size_t rest = index - f.offset;
    std::vector<ObjectId> args(f.arity);
    for (std::size_t k = f.arity; k-- > 0;) {
      args[k] = objects_[rest % objects_.size()];
      rest /= objects_.size();
    }
    return GroundAtom{f.name, std::move(args)};
  }
  throw ModelError("atom index out of range");
}

ActionTheory::ActionTheory(Definition def) : def_(std::move(def)) {
  std::set<ObjectId> objectSet;
  for (const auto& o : def_.objects)
    if (!objectSet.insert(o).second) throw ModelError("object " + o + " declared twice");
  def_.sorts[std::string(logic::kDefaultSort)] = def_.objects;
  for (const auto& [sort, members] : def_.sorts)
    for (const auto& m : members)
      if (!objectSet.count(m)) throw ModelError("sort " + sort + " names unknown object " + m);

  for (std::size_t i = 0; i < def_.predicates.size(); ++i)
    if (!predicateIndex_.emplace(def_.predicates[i].name, i).second)
      throw ModelError("predicate " + def_.predicates[i].name + " declared twice");

  for (const auto& atom : def_.rigidTruths) {
    auto it = predicateIndex_.find(atom.name);
    if (it == predicateIndex_.end() || def_.predicates[it->second].kind != PredicateKind::Rigid)
      throw ModelError("rigid truth for undeclared rigid predicate " + atom.name);
    if (atom.args.size() != def_.predicates[it->second].arity) throw ModelError("wrong arity in rigid truth " + atom.name);
    for (const auto& a : atom.args)
      if (!objectSet.count(a)) throw ModelError("rigid truth " + atom.name + " names unknown object " + a);
  }

  for (std::size_t i = 0; i < def_.operations.size(); ++i)
    if (!operationIndex_.emplace(def_.operations[i].name, i).second)
      throw ModelError("operation " + def_.operations[i].name + " declared twice");

  // Every atom must name a declared predicate with matching arity and kind.
  auto checkAtoms = [&](const Formula& phi, const std::string& where) {
    forEachAtom(phi, [&](const Formula& atom) {
      if (atom.kind() == FormulaKind::Equal) return;
      if (atom.kind() == FormulaKind::ActionEq) {
        auto it = operationIndex_.find(atom.symbol());
        if (it == operationIndex_.end()) throw ModelError(where + ": unknown operation " + atom.symbol());
        if (def_.operations[it->second].params.size() != atom.terms().size())
          throw ModelError(where + ": wrong arity for operation " + atom.symbol());
        return;
      }
      auto it = predicateIndex_.find(atom.symbol());
      if (it == predicateIndex_.end()) throw ModelError(where + ": undeclared predicate " + atom.symbol());
      const auto& decl = def_.predicates[it->second];
      if (decl.arity != atom.terms().size()) throw ModelError(where + ": wrong arity for " + atom.symbol());
      const bool isFluentAtom = atom.kind() == FormulaKind::Fluent;
      if (isFluentAtom != (decl.kind != PredicateKind::Rigid))
        throw ModelError(where + ": " + atom.symbol() + (isFluentAtom ? " is rigid" : " is a fluent and needs a situation"));
    });
  };
  auto checkScope = [&](const Formula& phi, const std::vector<std::string>& params, const std::string& where) {
    for (const auto& v : logic::freeObjectVariables(phi))
      if (std::find(params.begin(), params.end(), v) == params.end())
        throw ModelError(where + ": free variable " + v + " is not a parameter");
    for (const auto& v : logic::situationVariables(phi))
      if (v != logic::kSituationVariable) throw ModelError(where + ": unexpected situation variable " + v);
  };

  for (auto& op : def_.operations) {
    if (op.paramSorts.empty()) op.paramSorts.assign(op.params.size(), std::string(logic::kDefaultSort));
    if (op.paramSorts.size() != op.params.size()) throw ModelError("operation " + op.name + ": sort list mismatch");
    for (const auto& s : op.paramSorts)
      if (!def_.sorts.count(s)) throw ModelError("operation " + op.name + ": unknown sort " + s);
    std::set<std::string> seen(op.params.begin(), op.params.end());
    if (seen.size() != op.params.size()) throw ModelError("operation " + op.name + ": repeated parameter");
    checkAtoms(op.precondition, "precondition of " + op.name);
    checkScope(op.precondition, op.params, "precondition of " + op.name);
    forEachAtom(op.precondition, [&](const Formula& atom) {
      if (atom.kind() == FormulaKind::ActionEq) throw ModelError("precondition of " + op.name + " mentions alpha");
    });
  }

  for (std::size_t i = 0; i < def_.successors.size(); ++i) {
    const auto& ax = def_.successors[i];
    auto it = predicateIndex_.find(ax.fluent);
    if (it == predicateIndex_.end() || def_.predicates[it->second].kind != PredicateKind::Primitive)
      throw ModelError("successor axiom for non-primitive fluent " + ax.fluent);
    if (ax.params.size() != def_.predicates[it->second].arity)
      throw ModelError("successor axiom for " + ax.fluent + ": wrong number of parameters");
    if (!successorIndex_.emplace(ax.fluent, i).second) throw ModelError("two successor axioms for " + ax.fluent);
    for (const auto* g : {&ax.gammaPlus, &ax.gammaMinus}) {
      checkAtoms(*g, "successor axiom for " + ax.fluent);
      checkScope(*g, ax.params, "successor axiom for " + ax.fluent);
    }
  }
  for (const auto& p : def_.predicates)
    if (p.kind == PredicateKind::Primitive && !successorIndex_.count(p.name))
      throw ModelError("no successor axiom for primitive fluent " + p.name);

  // Derived definitions: one per derived fluent, ordered so dependencies come first.
  std::map<std::string, const DerivedFluentDef*> defs;
  for (const auto& d : def_.derived) {
    auto it = predicateIndex_.find(d.fluent);
    if (it == predicateIndex_.end() || def_.predicates[it->second].kind != PredicateKind::Derived)
      throw ModelError("definition for non-derived fluent " + d.fluent);
    if (!defs.emplace(d.fluent, &d).second) throw ModelError("two definitions for " + d.fluent);
    const auto& decl = def_.predicates[it->second];
    if (d.kind == DerivedFluentDef::Kind::TransitiveClosure) {
      auto base = predicateIndex_.find(d.closureOf);
      if (base == predicateIndex_.end() || def_.predicates[base->second].kind == PredicateKind::Rigid)
        throw ModelError(d.fluent + ": closure of unknown fluent " + d.closureOf);
      if (decl.arity != 2 || def_.predicates[base->second].arity != 2)
        throw ModelError(d.fluent + ": transitive closure needs binary fluents");
    } else {
      if (d.params.size() != decl.arity) throw ModelError(d.fluent + ": wrong number of parameters");
      checkAtoms(d.definition, "definition of " + d.fluent);
      checkScope(d.definition, d.params, "definition of " + d.fluent);
    }
  }
  for (const auto& p : def_.predicates)
    if (p.kind == PredicateKind::Derived && !defs.count(p.name)) throw ModelError("no definition for derived fluent " + p.name);

  auto dependencies = [&](const DerivedFluentDef& d) {
    std::set<std::string> out;
    if (d.kind == DerivedFluentDef::Kind::TransitiveClosure) {
      out.insert(d.closureOf);
    } else {
      forEachAtom(d.definition, [&](const Formula& a) {
        if (a.kind() == FormulaKind::Fluent) out.insert(a.symbol());
      });
    }
    return out;
  };
  std::map<std::string, int> mark;  // 1 = visiting, 2 = done
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    auto found = defs.find(name);
    if (found == defs.end()) return;  // primitive
    if (mark[name] == 2) return;
    if (mark[name] == 1) throw ModelError("cyclic derived fluent definition through " + name);
    mark[name] = 1;
    for (const auto& dep : dependencies(*found->second)) visit(dep);
    mark[name] = 2;
    derivedOrder_.push_back(*found->second);
  };
  for (const auto& p : def_.predicates)
    if (p.kind == PredicateKind::Derived) visit(p.name);

  for (const auto& ax : def_.initialAxioms) {
    checkAtoms(ax, "initial axiom");
    if (!logic::isVariableFree(ax)) throw ModelError("initial axiom has free object variables");
    if (!logic::situationVariables(ax).empty()) throw ModelError("initial axioms may only mention s0");
    forEachAtom(ax, [&](const Formula& atom) {
      if (atom.kind() == FormulaKind::Fluent && !atom.situation().isInitial())
        throw ModelError("initial axioms may only mention s0");
      if (atom.kind() == FormulaKind::ActionEq) throw ModelError("initial axiom mentions alpha");
    });
  }

  std::vector<PredicateDecl> primitive, derived;
  for (const auto& p : def_.predicates) {
    if (p.kind == PredicateKind::Primitive) primitive.push_back(p);
    if (p.kind == PredicateKind::Derived) derived.push_back(p);
  }
  primitive_ = AtomLayout(def_.objects, primitive);
  derived_ = AtomLayout(def_.objects, derived);
}

const PredicateDecl& ActionTheory::predicate(const std::string& name) const {
  auto it = predicateIndex_.find(name);
  if (it == predicateIndex_.end()) throw ModelError("undeclared predicate " + name);
  return def_.predicates[it->second];
}

const OperationDecl& ActionTheory::operation(const std::string& name) const {
  auto it = operationIndex_.find(name);
  if (it == operationIndex_.end()) throw ModelError("undeclared operation " + name);
  return def_.operations[it->second];
}

const SuccessorAxiom& ActionTheory::successor(const std::string& fluent) const {
  auto it = successorIndex_.find(fluent);
  if (it == successorIndex_.end()) throw ModelError("no successor axiom for " + fluent);
  return def_.successors[it->second];
}

bool ActionTheory::rigidTruth(const std::string& name, std::span<const ObjectId> args) const {
  return def_.rigidTruths.count(GroundAtom{name, {args.begin(), args.end()}}) > 0;
}

std::vector<Action> ActionTheory::groundActions() const {
  std::vector<Action> out;
  for (const auto& op : def_.operations) {
    std::vector<ObjectId> args(op.params.size());
    std::function<void(std::size_t)> fill = [&](std::size_t k) {
      if (k == args.size()) {
        out.push_back(logic::groundAction(op.name, args));
        return;
      }
      for (const auto& o : domain(op.paramSorts[k])) {
        args[k] = o;
        fill(k + 1);
      }
    };
    fill(0);
  }
  return out;
}

void ActionTheory::checkGroundAction(const Action& a) const {
  const auto& op = operation(a.name);
  if (a.args.size() != op.params.size())
    throw ModelError("operation " + a.name + " expects " + std::to_string(op.params.size()) + " arguments");
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!a.args[i].isConstant()) throw GroundingError("operation " + a.name + " has unground argument " + a.args[i].name());
    const auto& dom = domain(op.paramSorts[i]);
    if (std::find(dom.begin(), dom.end(), a.args[i].name()) == dom.end())
      throw ModelError("argument " + a.args[i].name() + " of " + a.name + " is not of sort " + op.paramSorts[i]);
  }
}

logic::Vocabulary ActionTheory::vocabulary() const {
  logic::Vocabulary v;
  v.objects.insert(def_.objects.begin(), def_.objects.end());
  for (const auto& op : def_.operations) v.operations[op.name] = op.params.size();
  for (const auto& p : def_.predicates) (p.kind == PredicateKind::Rigid ? v.rigid : v.fluents)[p.name] = p.arity;
  for (const auto& [sort, members] : def_.sorts) v.sorts.insert(sort);
  return v;
}

const std::vector<ObjectId>& ActionTheory::domain(const std::string& sort) const {
  auto it = def_.sorts.find(sort);
  if (it == def_.sorts.end()) throw ModelError("unknown sort " + sort);
  return it->second;
}

std::optional<bool> ActionTheory::rigid(const std::string& name, std::span<const ObjectId> args) const {
  auto it = predicateIndex_.find(name);
  if (it == predicateIndex_.end() || def_.predicates[it->second].kind != PredicateKind::Rigid) return std::nullopt;
  return rigidTruth(name, args);
}

std::optional<std::size_t> ActionTheory::domainSize(const std::string& sort) const {
  auto it = def_.sorts.find(sort);
  if (it == def_.sorts.end()) return std::nullopt;
  return it->second.size();
}

bool StateView::rigid(const std::string& name, std::span<const ObjectId> args) const {
  const auto& decl = theory_.predicate(name);
  if (decl.kind != PredicateKind::Rigid) throw ModelError(name + " is not rigid");
  return theory_.rigidTruth(name, args);
}

// The situation argument is not consulted: the view stands for a single situation.
bool StateView::fluent(const std::string& name, std::span<const ObjectId> args, const Situation&) const {
  if (theory_.primitiveLayout().find(name)) return state_.primitive.get(theory_.primitiveLayout().index(name, args));
  std::size_t i = theory_.derivedLayout().index(name, args);
  if (i >= state_.derived.size()) throw TotalityError("derived fluent " + name + " was not computed");
  return state_.derived[i];
}

DerivedState computeDerived(const ActionTheory& theory, const WorldState& ws) {
  if (ws.size() != theory.primitiveLayout().size()) throw TotalityError("world state does not match the theory");
  DerivedState out{ws, std::vector<bool>(theory.derivedLayout().size(), false)};
  const auto& objects = theory.objects();
  const std::size_t n = objects.size();
  StateView view(theory, out);
  for (const auto& d : theory.derivedDefinitions()) {
    const auto* fam = theory.derivedLayout().find(d.fluent);
    if (d.kind == DerivedFluentDef::Kind::TransitiveClosure) {
      std::vector<char> base(n * n), closure(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          std::vector<ObjectId> args{objects[i], objects[j]};
          base[i * n + j] = view.fluent(d.closureOf, args, Situation::initial());
        }
      closure = base;
      // closure := closure ∪ closure∘base until nothing changes
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < n; ++k) {
            if (!closure[i * n + k]) continue;
            for (std::size_t j = 0; j < n; ++j)
              if (base[k * n + j] && !closure[i * n + j]) {
                closure[i * n + j] = 1;
                changed = true;
              }
          }
      }
      for (std::size_t i = 0; i < n * n; ++i) out.derived[fam->offset + i] = closure[i] != 0;
    } else {
      for (std::size_t i = 0; i < fam->count; ++i) {
        GroundAtom atom = theory.derivedLayout().atom(fam->offset + i);
        logic::Bindings b;
        for (std::size_t k = 0; k < d.params.size(); ++k) b.emplace_back(d.params[k], atom.args[k]);
        out.derived[fam->offset + i] = logic::evaluate(view, d.definition, b);
      }
    }
  }
  return out;
}

bool holds(const ActionTheory& theory, const DerivedState& state, const Formula& phi) {
  return logic::evaluate(StateView(theory, state), phi);
}

bool possible(const ActionTheory& theory, const DerivedState& state, const Action& op) {
  theory.checkGroundAction(op);
  const auto& decl = theory.operation(op.name);
  logic::Bindings b;
  for (std::size_t i = 0; i < decl.params.size(); ++i) b.emplace_back(decl.params[i], op.args[i].name());
  return logic::evaluate(StateView(theory, state), decl.precondition, b);
}

bool possible(const ActionTheory& theory, const WorldState& ws, const Action& op) {
  return possible(theory, computeDerived(theory, ws), op);
}

WorldState progress(const ActionTheory& theory, const DerivedState& state, const Action& op) {
  if (!possible(theory, state, op)) throw PreconditionViolation("operation " + logic::print(op) + " is not possible");
  StateView view(theory, state);
  WorldState next = state.primitive;
  const auto& layout = theory.primitiveLayout();
  for (const auto& fam : layout.families()) {
    const auto& ax = theory.successor(fam.name);
    Formula plus = logic::simplify(logic::bindAction(ax.gammaPlus, op), &theory);
    Formula minus = logic::simplify(logic::bindAction(ax.gammaMinus, op), &theory);
    if (plus.kind() == FormulaKind::False && minus.kind() == FormulaKind::False) continue;
    for (std::size_t i = 0; i < fam.count; ++i) {
      GroundAtom atom = layout.atom(fam.offset + i);
      logic::Bindings b;
      for (std::size_t k = 0; k < ax.params.size(); ++k) b.emplace_back(ax.params[k], atom.args[k]);
      const bool old = state.primitive.get(fam.offset + i);
      next.set(fam.offset + i, logic::evaluate(view, plus, b) || (old && !logic::evaluate(view, minus, b)));
    }
  }
  return next;
}

WorldState progress(const ActionTheory& theory, const WorldState& ws, const Action& op) {
  return progress(theory, computeDerived(theory, ws), op);
}

namespace {

/// Partial assignment of primitive atoms used while enumerating initial worlds.
class PartialWorld : public logic::PartialInterpretation {
 public:
  PartialWorld(const ActionTheory& theory, const std::vector<signed char>& values) : theory_(theory), values_(values) {}

  const std::vector<ObjectId>& domain(const std::string& sort) const override { return theory_.domain(sort); }
  std::optional<bool> rigid(const std::string& name, std::span<const ObjectId> args) const override {
    return theory_.rigidTruth(name, args);
  }
  std::optional<bool> fluent(const std::string& name, std::span<const ObjectId> args, const Situation&) const override {
    signed char v = values_[theory_.primitiveLayout().index(name, args)];
    if (v < 0) return std::nullopt;
    return v != 0;
  }

 private:
  const ActionTheory& theory_;
  const std::vector<signed char>& values_;
};

}  // namespace

void forEachInitialWorld(const ActionTheory& theory, const std::function<bool(const WorldState&)>& yield) {
  const auto& layout = theory.primitiveLayout();
  const std::size_t n = layout.size();

  // Ground D0 to quantifier-free formulas over primitive atoms, and index which
  // axioms mention which atom so each assignment only re-checks those.
  std::vector<Formula> axioms;
  std::vector<std::vector<std::size_t>> watchers(n);
  for (const auto& ax : theory.initialAxioms()) {
    Formula g = logic::simplify(logic::expandQuantifiers(unfoldDerived(theory, ax), theory), &theory);
    if (g.kind() == FormulaKind::True) continue;
    if (g.kind() == FormulaKind::False) return;
    std::set<std::size_t> mentioned;
    forEachAtom(g, [&](const Formula& atom) {
      if (atom.kind() != FormulaKind::Fluent) return;
      std::vector<ObjectId> args;
      for (const auto& t : atom.terms()) args.push_back(t.name());
      mentioned.insert(layout.index(atom.symbol(), args));
    });
    for (auto i : mentioned) watchers[i].push_back(axioms.size());
    if (mentioned.empty()) continue;  // closed formula already decided by simplify
    axioms.push_back(std::move(g));
  }

  std::vector<signed char> values(n, -1);
  PartialWorld view(theory, values);
  bool stop = false;
  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (stop) return;
    if (i == n) {
      WorldState ws(n);
      for (std::size_t k = 0; k < n; ++k) ws.set(k, values[k] == 1);
      if (!yield(ws)) stop = true;
      return;
    }
    for (signed char v : {0, 1}) {
      values[i] = v;
      bool ok = true;
      for (auto a : watchers[i])
        if (logic::evaluatePartial(view, axioms[a]) == logic::Truth::False) {
          ok = false;
          break;
        }
      if (ok) search(i + 1);
      if (stop) break;
    }
    values[i] = -1;
  };
  search(0);
}

std::vector<WorldState> enumerateInitialWorlds(const ActionTheory& theory) {
  std::vector<WorldState> out;
  forEachInitialWorld(theory, [&](const WorldState& ws) {
    out.push_back(ws);
    return true;
  });
  return out;
}

bool satisfiesInitialAxioms(const ActionTheory& theory, const WorldState& ws) {
  DerivedState state = computeDerived(theory, ws);
  StateView view(theory, state);
  for (const auto& ax : theory.initialAxioms())
    if (!logic::evaluate(view, ax)) return false;
  return true;
}

namespace {

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
  std::string name = base;
  while (avoid.count(name)) name += '\'';
  return name;
}

/// Simple paths of `base` edges from a to b with at most `edges` edges:
/// C(a) = G(a,b) | exists z . z != b & z != a & (earlier z's) & G(a,z) & C(z).
/// Every walk contains a simple path, so this equals the transitive closure.
Formula closureFormula(const std::string& base, const Term& a, const Term& b, const Situation& sit, std::size_t edges,
                       std::vector<Term>& visited, const std::set<std::string>& avoid) {
  Formula direct = Formula::fluent(base, {a, b}, sit);
  if (edges <= 1) return direct;
  const std::string z = freshName("z" + std::to_string(visited.size()), avoid);
  Term zt = Term::variable(z);
  std::vector<Formula> parts;
  parts.push_back(Formula::negation(Formula::equal(zt, b)));
  for (const auto& v : visited) parts.push_back(Formula::negation(Formula::equal(zt, v)));
  parts.push_back(Formula::fluent(base, {a, zt}, sit));
  visited.push_back(zt);
  parts.push_back(closureFormula(base, zt, b, sit, edges - 1, visited, avoid));
  visited.pop_back();
  return Formula::disjunction(direct, Formula::exists(z, std::string(logic::kDefaultSort), Formula::conjunction(parts)));
}

}  // namespace

Formula unfoldDerived(const ActionTheory& theory, const Formula& phi) {
  return logic::mapFluents(phi, [&](const Formula& atom) -> Formula {
    const auto& decl = theory.predicate(atom.symbol());
    if (decl.kind != PredicateKind::Derived) return atom;
    const DerivedFluentDef* def = nullptr;
    for (const auto& d : theory.derivedDefinitions())
      if (d.fluent == atom.symbol()) def = &d;
    if (def->kind == DerivedFluentDef::Kind::TransitiveClosure) {
      std::set<std::string> avoid;
      for (const auto& t : atom.terms())
        if (t.isVariable()) avoid.insert(t.name());
      std::vector<Term> visited{atom.terms()[0]};
      Formula f = closureFormula(def->closureOf, atom.terms()[0], atom.terms()[1], atom.situation(),
                                 std::max<std::size_t>(theory.objects().size(), 1), visited, avoid);
      return unfoldDerived(theory, f);
    }
    // Rename parameters apart first so that arguments naming another parameter are not re-substituted.
    Formula f = def->definition;
    for (std::size_t k = 0; k < def->params.size(); ++k)
      f = logic::substituteTerm(f, def->params[k], Term::variable("#" + std::to_string(k)));
    for (std::size_t k = 0; k < def->params.size(); ++k)
      f = logic::substituteTerm(f, "#" + std::to_string(k), atom.terms()[k]);
    f = logic::substitute(f, logic::kSituationVariable, atom.situation());
    return unfoldDerived(theory, f);
  });
}

std::vector<GroundAtom> trueAtoms(const ActionTheory& theory, const WorldState& ws) {
  std::vector<GroundAtom> out;
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (ws.get(i)) out.push_back(theory.primitiveLayout().atom(i));
  return out;
}

WorldState worldFromAtoms(const ActionTheory& theory, std::span<const GroundAtom> atoms) {
  WorldState ws(theory.primitiveLayout().size());
  for (const auto& a : atoms) ws.set(theory.primitiveLayout().index(a.name, a.args), true);
  return ws;
}

std::string describe(const GroundAtom& atom) { return atom.name + "(" + joinArgs(atom.args) + ")"; }

std::string describe(const ActionTheory& theory, const WorldState& ws) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : trueAtoms(theory, ws)) {
    out += (first ? "" : ", ") + describe(a);
    first = false;
  }
  return out + "}";
}

}  // namespace robotval::action
