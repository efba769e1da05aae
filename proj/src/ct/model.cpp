#include "robotval/ct/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "robotval/errors.hpp"
#include "robotval/regression/wp.hpp"

namespace robotval::ct {

using logic::Formula;
using logic::FormulaKind;

std::size_t CtParameter::valueIndex(std::string_view value) const {
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == value) return i;
  throw ModelError("parameter " + name + " has no value " + std::string(value));
}

std::size_t CtModel::parameterIndex(std::string_view name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i)
    if (parameters[i].name == name) return i;
  throw ModelError("unknown parameter " + std::string(name));
}

CtExpr CtExpr::bottom() {
  CtExpr e;
  e.kind_ = Kind::False;
  return e;
}

CtExpr CtExpr::eq(std::size_t parameter, std::size_t value) {
  CtExpr e;
  e.kind_ = Kind::Eq;
  e.parameter_ = parameter;
  e.value_ = value;
  return e;
}

CtExpr CtExpr::negation(CtExpr inner) {
  if (inner.kind_ == Kind::True) return bottom();
  if (inner.kind_ == Kind::False) return top();
  if (inner.kind_ == Kind::Not) return inner.children_[0];
  CtExpr e;
  e.kind_ = Kind::Not;
  e.children_.push_back(std::move(inner));
  return e;
}

namespace {

CtExpr junction(CtExpr::Kind kind, std::vector<CtExpr> parts) {
  const CtExpr::Kind unit = kind == CtExpr::Kind::And ? CtExpr::Kind::True : CtExpr::Kind::False;
  const CtExpr::Kind zero = kind == CtExpr::Kind::And ? CtExpr::Kind::False : CtExpr::Kind::True;
  std::vector<CtExpr> kept;
  for (auto& p : parts) {
    if (p.kind() == unit) continue;
    if (p.kind() == zero) return p;
    if (p.kind() == kind)
      kept.insert(kept.end(), p.children().begin(), p.children().end());
    else
      kept.push_back(std::move(p));
  }
  if (kept.empty()) return kind == CtExpr::Kind::And ? CtExpr::top() : CtExpr::bottom();
  if (kept.size() == 1) return kept[0];
  return kind == CtExpr::Kind::And ? CtExpr::conjunction(std::move(kept)) : CtExpr::disjunction(std::move(kept));
}

}  // namespace

CtExpr CtExpr::conjunction(std::vector<CtExpr> parts) {
  bool flat = parts.size() > 1;
  for (const auto& p : parts)
    if (p.kind_ == Kind::True || p.kind_ == Kind::False || p.kind_ == Kind::And) flat = false;
  if (!flat) return junction(Kind::And, std::move(parts));
  CtExpr e;
  e.kind_ = Kind::And;
  e.children_ = std::move(parts);
  return e;
}

CtExpr CtExpr::disjunction(std::vector<CtExpr> parts) {
  bool flat = parts.size() > 1;
  for (const auto& p : parts)
    if (p.kind_ == Kind::True || p.kind_ == Kind::False || p.kind_ == Kind::Or) flat = false;
  if (!flat) return junction(Kind::Or, std::move(parts));
  CtExpr e;
  e.kind_ = Kind::Or;
  e.children_ = std::move(parts);
  return e;
}

CtExpr CtExpr::implication(CtExpr a, CtExpr b) {
  if (a.kind_ == Kind::False || b.kind_ == Kind::True) return top();
  if (a.kind_ == Kind::True) return b;
  if (b.kind_ == Kind::False) return negation(std::move(a));
  CtExpr e;
  e.kind_ = Kind::Implies;
  e.children_ = {std::move(a), std::move(b)};
  return e;
}

bool CtExpr::evaluate(const std::vector<std::size_t>& assignment) const {
  switch (kind_) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Eq: return assignment[parameter_] == value_;
    case Kind::Not: return !children_[0].evaluate(assignment);
    case Kind::And:
      for (const auto& c : children_)
        if (!c.evaluate(assignment)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : children_)
        if (c.evaluate(assignment)) return true;
      return false;
    case Kind::Implies: return !children_[0].evaluate(assignment) || children_[1].evaluate(assignment);
  }
  return false;
}

std::vector<std::size_t> CtExpr::scope() const {
  std::set<std::size_t> out;
  std::vector<const CtExpr*> todo{this};
  while (!todo.empty()) {
    const CtExpr* e = todo.back();
    todo.pop_back();
    if (e->kind_ == Kind::Eq) out.insert(e->parameter_);
    for (const auto& c : e->children_) todo.push_back(&c);
  }
  return {out.begin(), out.end()};
}

namespace {

constexpr std::size_t kWorldCap = 1'000'000;

std::vector<std::string> stepDomain(const tasks::Grammar& grammar) {
  std::vector<std::string> out;
  for (const auto& r : grammar.rules()) out.push_back(r.id);
  out.emplace_back(kEpsilon);
  return out;
}

/// x <_lex y over tuple components with the domain order (epsilon last).
CtExpr lexLess(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y, std::size_t k,
               std::size_t domainSize) {
  if (k == x.size()) return CtExpr::bottom();
  std::vector<CtExpr> parts;
  for (std::size_t u = 0; u < domainSize; ++u)
    for (std::size_t v = u + 1; v < domainSize; ++v)
      parts.push_back(CtExpr::conjunction({CtExpr::eq(x[k], u), CtExpr::eq(y[k], v)}));
  CtExpr rest = lexLess(x, y, k + 1, domainSize);
  if (rest.kind() != CtExpr::Kind::False)
    for (std::size_t u = 0; u < domainSize; ++u)
      parts.push_back(CtExpr::conjunction({CtExpr::eq(x[k], u), CtExpr::eq(y[k], u), rest}));
  return CtExpr::disjunction(std::move(parts));
}

CtExpr stepGuard(const CtModel& model, std::span<const std::size_t> stepParams, std::span<const std::string> values) {
  std::vector<CtExpr> parts;
  for (std::size_t k = 0; k < values.size(); ++k)
    parts.push_back(CtExpr::eq(stepParams[k], model.parameters[stepParams[k]].valueIndex(values[k])));
  return CtExpr::conjunction(std::move(parts));
}

void addSplit(CtModel& model, const CtExpr& e, const std::string& origin) {
  if (e.kind() == CtExpr::Kind::True) return;
  if (e.kind() == CtExpr::Kind::And) {
    for (const auto& c : e.children()) addSplit(model, c, origin);
    return;
  }
  model.constraints.push_back({e, origin});
}

}  // namespace

CtExpr encodeFormula(const CtModel& model, const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::True: return CtExpr::top();
    case FormulaKind::False: return CtExpr::bottom();
    case FormulaKind::Not: return CtExpr::negation(encodeFormula(model, phi.child(0)));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<CtExpr> parts;
      for (std::size_t i = 0; i < phi.arity(); ++i) parts.push_back(encodeFormula(model, phi.child(i)));
      return phi.kind() == FormulaKind::And ? CtExpr::conjunction(std::move(parts)) : CtExpr::disjunction(std::move(parts));
    }
    case FormulaKind::Implies:
      return CtExpr::implication(encodeFormula(model, phi.child(0)), encodeFormula(model, phi.child(1)));
    case FormulaKind::Iff: {
      CtExpr a = encodeFormula(model, phi.child(0));
      CtExpr b = encodeFormula(model, phi.child(1));
      return CtExpr::conjunction({CtExpr::implication(a, b), CtExpr::implication(b, a)});
    }
    case FormulaKind::Fluent: {
      std::vector<std::string> args;
      for (const auto& t : phi.terms()) {
        if (!t.isConstant()) throw InternalError("cannot encode fluent with variable argument " + t.name());
        args.push_back(t.name());
      }
      if (args.size() <= 1) {
        for (std::size_t i = 0; i < model.parameters.size(); ++i) {
          const auto& p = model.parameters[i];
          if (p.kind == ParameterKind::Flag && p.family == phi.symbol() && p.args == args) return CtExpr::eq(i, 1);
        }
        throw InternalError("no parameter for fluent " + phi.symbol());
      }
      // F(a1..an) holds iff some tuple i has F_i_k = a_k for every k.
      std::map<std::size_t, std::vector<std::size_t>> tuples;
      for (std::size_t i = 0; i < model.parameters.size(); ++i) {
        const auto& p = model.parameters[i];
        if (p.kind == ParameterKind::Tuple && p.family == phi.symbol()) tuples[p.instance].push_back(i);
      }
      std::vector<CtExpr> options;
      for (const auto& [instance, params] : tuples) {
        std::vector<CtExpr> parts;
        for (std::size_t k = 0; k < params.size(); ++k)
          parts.push_back(CtExpr::eq(params[k], model.parameters[params[k]].valueIndex(args[k])));
        options.push_back(CtExpr::conjunction(std::move(parts)));
      }
      return CtExpr::disjunction(std::move(options));
    }
    default: throw InternalError("cannot encode formula node into parameter atoms");
  }
}

CtModel buildModel(const ActionTheory& theory, const tasks::Grammar& grammar, std::size_t K,
                   std::optional<std::size_t> strength) {
  if (K == 0) throw ModelError("derivation depth K must be at least 1");
  CtModel model;
  model.depth = K;
  model.strength = strength;
  const auto& objects = theory.objects();
  const auto& layout = theory.primitiveLayout();

  // Initial worlds give the tuple bounds and the accomplishability counts.
  std::vector<WorldState> worlds;
  bool worldsComplete = true;
  action::forEachInitialWorld(theory, [&](const WorldState& w) {
    if (worlds.size() == kWorldCap) {
      worldsComplete = false;
      return false;
    }
    worlds.push_back(w);
    return true;
  });

  for (const auto& f : layout.families()) {
    if (f.arity <= 1) {
      for (std::size_t i = 0; i < f.count; ++i) {
        auto atom = layout.atom(f.offset + i);
        CtParameter p;
        p.name = action::describe(atom);
        p.domain = {"false", "true"};
        p.kind = ParameterKind::Flag;
        p.family = f.name;
        p.args = atom.args;
        model.parameters.push_back(std::move(p));
      }
      continue;
    }
    FamilyBound b{f.name, f.arity, 0, worldsComplete && !worlds.empty()};
    if (b.fromInitialWorlds) {
      for (const auto& w : worlds) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < f.count; ++i) n += w.get(f.offset + i) ? 1 : 0;
        b.bound = std::max(b.bound, n);
      }
    } else {
      b.bound = f.count;
      model.warnings.push_back("instance bound for " + f.name + " not derivable from the initial axioms; using " +
                               std::to_string(f.count));
    }
    model.bounds.push_back(b);
    std::vector<std::string> domain(objects.begin(), objects.end());
    domain.emplace_back(kEpsilon);
    for (std::size_t i = 1; i <= b.bound; ++i)
      for (std::size_t k = 1; k <= f.arity; ++k) {
        CtParameter p;
        p.name = f.name + "_" + std::to_string(i) + "_" + std::to_string(k);
        p.domain = domain;
        p.kind = ParameterKind::Tuple;
        p.family = f.name;
        p.instance = i;
        p.component = k;
        model.parameters.push_back(std::move(p));
      }
  }

  std::vector<std::size_t> stepParams;
  for (std::size_t k = 1; k <= K; ++k) {
    CtParameter p;
    p.name = "d_" + std::to_string(k);
    p.domain = stepDomain(grammar);
    p.kind = ParameterKind::Step;
    p.instance = k;
    stepParams.push_back(model.parameters.size());
    model.parameters.push_back(std::move(p));
  }

  // Tuples: epsilon all-or-nothing, strictly increasing, epsilon tuples last.
  for (const auto& b : model.bounds) {
    std::vector<std::vector<std::size_t>> tuples(b.bound);
    for (std::size_t i = 0; i < model.parameters.size(); ++i) {
      const auto& p = model.parameters[i];
      if (p.kind == ParameterKind::Tuple && p.family == b.family) tuples[p.instance - 1].push_back(i);
    }
    const std::size_t eps = objects.size();
    for (const auto& t : tuples)
      for (std::size_t k = 1; k < t.size(); ++k) {
        addSplit(model, CtExpr::implication(CtExpr::eq(t[0], eps), CtExpr::eq(t[k], eps)), "symmetry");
        addSplit(model, CtExpr::implication(CtExpr::eq(t[k], eps), CtExpr::eq(t[0], eps)), "symmetry");
      }
    for (std::size_t i = 0; i + 1 < tuples.size(); ++i) {
      CtExpr bothEps = CtExpr::conjunction({CtExpr::eq(tuples[i][0], eps), CtExpr::eq(tuples[i + 1][0], eps)});
      addSplit(model, CtExpr::disjunction({lexLess(tuples[i], tuples[i + 1], 0, eps + 1), bothEps}), "symmetry");
    }
  }

  for (const auto& axiom : theory.initialAxioms()) {
    Formula g = logic::simplify(logic::expandQuantifiers(action::unfoldDerived(theory, axiom), theory), &theory);
    addSplit(model, encodeFormula(model, g), "D0");
  }

  // Grammar validity: each prefix of a derivation (epsilon-padded to K) fixes the allowed next steps.
  std::map<std::vector<std::string>, std::set<std::string>> next;
  tasks::forEachDerivation(grammar, K, [&](const tasks::Derivation& d, const std::vector<tasks::GrammarSymbol>& sentence) {
    std::vector<std::string> padded = d.steps;
    padded.resize(K, std::string(kEpsilon));
    for (std::size_t k = 0; k < K; ++k)
      next[std::vector<std::string>(padded.begin(), padded.begin() + static_cast<std::ptrdiff_t>(k))].insert(padded[k]);
    model.derivations.push_back(
        {d, tasks::parseTask(tasks::sentenceText(sentence), theory.vocabulary()), Formula::top(), 0});
    return true;
  });
  if (next.empty()) addSplit(model, CtExpr::bottom(), "grammar");
  for (const auto& [prefix, allowed] : next) {
    std::vector<CtExpr> options;
    const std::size_t param = stepParams[prefix.size()];
    for (const auto& v : allowed) options.push_back(CtExpr::eq(param, model.parameters[param].valueIndex(v)));
    addSplit(model,
             CtExpr::implication(stepGuard(model, stepParams, prefix), CtExpr::disjunction(std::move(options))),
             "grammar");
  }

  for (auto& info : model.derivations) {
    info.wp = regression::wp(Formula::top(), info.task, theory).formula;
    info.satisfyingWorlds = regression::satisfying(info.wp, theory, worlds).size();
    std::vector<std::string> padded = info.derivation.steps;
    padded.resize(K, std::string(kEpsilon));
    CtExpr guard = stepGuard(model, stepParams, padded);
    const bool accomplishable = worldsComplete ? info.satisfyingWorlds > 0 : info.wp.kind() != FormulaKind::False;
    if (accomplishable)
      model.constraints.push_back({CtExpr::implication(guard, encodeFormula(model, info.wp)), "wp"});
    else
      model.constraints.push_back({CtExpr::negation(guard), "block"});
  }
  return model;
}

bool satisfiesAll(const CtModel& model, const Assignment& a) {
  if (a.size() != model.parameters.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] >= model.parameters[i].domain.size()) return false;
  for (const auto& c : model.constraints)
    if (!c.expr.evaluate(a)) return false;
  return true;
}

std::optional<Assignment> encodeConfiguration(const CtModel& model, const ActionTheory& theory, const WorldState& w,
                                              const tasks::Derivation& derivation) {
  if (derivation.steps.size() > model.depth) return std::nullopt;
  const auto& layout = theory.primitiveLayout();
  const std::size_t eps = theory.objects().size();
  Assignment a(model.parameters.size(), 0);
  std::map<std::string, std::vector<logic::GroundAtom>> trueByFamily;
  for (const auto& atom : action::trueAtoms(theory, w)) trueByFamily[atom.name].push_back(atom);
  std::map<std::string, std::size_t> objectIndex;
  for (std::size_t i = 0; i < theory.objects().size(); ++i) objectIndex[theory.objects()[i]] = i;

  for (std::size_t i = 0; i < model.parameters.size(); ++i) {
    const auto& p = model.parameters[i];
    switch (p.kind) {
      case ParameterKind::Flag: a[i] = w.get(layout.index(p.family, p.args)) ? 1 : 0; break;
      case ParameterKind::Tuple: {
        const auto& atoms = trueByFamily[p.family];
        a[i] = p.instance <= atoms.size() ? objectIndex.at(atoms[p.instance - 1].args[p.component - 1]) : eps;
        break;
      }
      case ParameterKind::Step:
        a[i] = p.instance <= derivation.steps.size() ? p.valueIndex(derivation.steps[p.instance - 1])
                                                     : p.domain.size() - 1;
        break;
    }
  }
  for (const auto& b : model.bounds)
    if (trueByFamily[b.family].size() > b.bound) return std::nullopt;
  return a;
}

Configuration realizeConfiguration(const CtModel& model, const Assignment& a, const ActionTheory& theory,
                                   const tasks::Grammar& grammar) {
  if (a.size() != model.parameters.size()) throw InternalError("assignment has the wrong number of values");
  std::vector<logic::GroundAtom> atoms;
  std::map<std::pair<std::string, std::size_t>, std::vector<std::string>> tuples;
  tasks::Derivation derivation;
  bool ended = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& p = model.parameters[i];
    const std::string& v = p.domain.at(a[i]);
    switch (p.kind) {
      case ParameterKind::Flag:
        if (a[i] == 1) atoms.push_back({p.family, p.args});
        break;
      case ParameterKind::Tuple: tuples[{p.family, p.instance}].push_back(v); break;
      case ParameterKind::Step:
        if (v == kEpsilon) {
          ended = true;
        } else {
          if (ended) throw InternalError("derivation step after epsilon in " + p.name);
          derivation.steps.push_back(v);
        }
        break;
    }
  }
  for (const auto& [key, values] : tuples) {
    const bool anyEps = std::find(values.begin(), values.end(), kEpsilon) != values.end();
    if (!anyEps) atoms.push_back({key.first, values});
  }
  Configuration c;
  c.initialWorld = action::worldFromAtoms(theory, atoms);
  auto sentence = tasks::replay(grammar, derivation.steps);
  if (!sentence) throw InternalError("assignment does not encode a complete derivation");
  c.task = tasks::parseTask(tasks::sentenceText(*sentence), theory.vocabulary());
  c.derivation = derivation;
  c.assignment = a;

  if (!action::satisfiesInitialAxioms(theory, c.initialWorld))
    throw InternalError("decoded world " + action::describe(theory, c.initialWorld) + " violates the initial axioms");
  const DerivationInfo* info = nullptr;
  for (const auto& d : model.derivations)
    if (d.derivation == derivation) info = &d;
  const Formula wpFormula = info ? info->wp : regression::wp(Formula::top(), c.task, theory).formula;
  if (!action::holds(theory, action::computeDerived(theory, c.initialWorld), wpFormula))
    throw InternalError("task " + tasks::print(c.task) + " is not accomplishable from " +
                        action::describe(theory, c.initialWorld));
  auto canonical = encodeConfiguration(model, theory, c.initialWorld, derivation);
  if (!canonical || *canonical != a) throw InternalError("assignment is not the canonical encoding of its configuration");
  return c;
}

std::string printAssignment(const CtModel& model, const Assignment& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size() && i < model.parameters.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += model.parameters[i].name + "=" + model.parameters[i].domain.at(a[i]);
  }
  return out;
}

namespace {

int precedence(CtExpr::Kind k) {
  switch (k) {
    case CtExpr::Kind::Implies: return 1;
    case CtExpr::Kind::Or: return 2;
    case CtExpr::Kind::And: return 3;
    case CtExpr::Kind::Not: return 4;
    default: return 5;
  }
}

std::string printAt(const CtModel& model, const CtExpr& e, int outer) {
  std::string s;
  switch (e.kind()) {
    case CtExpr::Kind::True: return "true";
    case CtExpr::Kind::False: return "false";
    case CtExpr::Kind::Eq:
      return model.parameters[e.parameter()].name + "=" + model.parameters[e.parameter()].domain[e.value()];
    case CtExpr::Kind::Not: s = "!" + printAt(model, e.children()[0], 5); break;
    case CtExpr::Kind::And:
    case CtExpr::Kind::Or: {
      const char* sep = e.kind() == CtExpr::Kind::And ? " & " : " | ";
      const int p = precedence(e.kind());
      for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? sep : "") + printAt(model, e.children()[i], p + 1);
      break;
    }
    case CtExpr::Kind::Implies:
      s = printAt(model, e.children()[0], 2) + " -> " + printAt(model, e.children()[1], 1);
      break;
  }
  return precedence(e.kind()) < outer ? "(" + s + ")" : s;
}

}  // namespace

std::string printExpr(const CtModel& model, const CtExpr& e) { return printAt(model, e, 0); }

}  // namespace robotval::ct
