#include "robotval/regression/wp.hpp"

#include "robotval/errors.hpp"

namespace robotval::regression {

using logic::FormulaKind;
using logic::Situation;
using logic::Term;

namespace {

/// template[params := args], renaming the parameters apart first so an argument
/// that happens to be named like another parameter is not substituted twice.
Formula instantiateTemplate(const Formula& tmpl, const std::vector<std::string>& params, const std::vector<Term>& args) {
  Formula f = tmpl;
  for (std::size_t k = 0; k < params.size(); ++k)
    f = logic::substituteTerm(f, params[k], Term::variable("#" + std::to_string(k)));
  for (std::size_t k = 0; k < params.size(); ++k) f = logic::substituteTerm(f, "#" + std::to_string(k), args[k]);
  return f;
}

}  // namespace

Formula regress(const Formula& phi, const ActionTheory& theory) {
  Formula out = logic::mapFluents(phi, [&](const Formula& atom) -> Formula {
    const Situation& sit = atom.situation();
    if (!sit.isDo()) return atom;
    if (sit.predecessor().isDo())
      throw StructuralError("fluent " + atom.symbol() + " is nested under more than one do; regress innermost first");
    const auto& decl = theory.predicate(atom.symbol());
    if (decl.kind != action::PredicateKind::Primitive)
      throw StructuralError("derived fluent " + atom.symbol() + " must be unfolded before regression");
    const logic::Action& a = sit.action();
    if (!a.ground()) throw GroundingError("regression through unground operation " + a.name);
    theory.checkGroundAction(a);
    const auto& ax = theory.successor(atom.symbol());
    Formula plus = logic::bindAction(instantiateTemplate(ax.gammaPlus, ax.params, atom.terms()), a);
    Formula minus = logic::bindAction(instantiateTemplate(ax.gammaMinus, ax.params, atom.terms()), a);
    // gamma templates speak about situation s; they are evaluated before the action.
    plus = logic::substitute(plus, logic::kSituationVariable, sit.predecessor());
    minus = logic::substitute(minus, logic::kSituationVariable, sit.predecessor());
    Formula previous = Formula::fluent(atom.symbol(), atom.terms(), sit.predecessor());
    return Formula::disjunction(plus, Formula::conjunction(previous, Formula::negation(minus)));
  });
  return logic::simplify(out, &theory);
}

Formula possFormula(const ActionTheory& theory, const logic::Action& a) {
  if (!a.ground()) throw GroundingError("operation " + a.name + " has unground arguments");
  theory.checkGroundAction(a);
  const auto& op = theory.operation(a.name);
  Formula f = instantiateTemplate(op.precondition, op.params, a.args);
  return action::unfoldDerived(theory, f);
}

namespace {

Formula prepare(const Formula& phi, const ActionTheory& theory, WpMode mode) {
  Formula f = action::unfoldDerived(theory, phi);
  if (mode == WpMode::Ground) f = logic::expandQuantifiers(f, theory);
  return logic::simplify(f, &theory);
}

Formula wpImpl(const Formula& phi, const Task& tau, const ActionTheory& theory, WpMode mode) {
  switch (tau.kind()) {
    case tasks::TaskKind::Nil: return phi;
    case tasks::TaskKind::Test:
      return logic::simplify(Formula::conjunction(phi, prepare(tau.formula(), theory, mode)), &theory);
    case tasks::TaskKind::Op: {
      const logic::Action& a = tau.action();
      Formula poss = prepare(possFormula(theory, a), theory, mode);
      if (poss.kind() == FormulaKind::False) return poss;
      const Situation s = Situation::variable(std::string(logic::kSituationVariable));
      Formula shifted = logic::substitute(phi, logic::kSituationVariable, Situation::doing(a, s));
      return logic::simplify(Formula::conjunction(poss, regress(shifted, theory)), &theory);
    }
    case tasks::TaskKind::Seq:
      return wpImpl(wpImpl(phi, tau.second(), theory, mode), tau.first(), theory, mode);
    case tasks::TaskKind::Choice:
      return logic::simplify(
          Formula::disjunction(wpImpl(phi, tau.first(), theory, mode), wpImpl(phi, tau.second(), theory, mode)), &theory);
  }
  return phi;
}

}  // namespace

WpResult wp(const Formula& phi, const Task& tau, const ActionTheory& theory, WpMode mode) {
  for (const auto& v : logic::situationVariables(phi))
    if (v != logic::kSituationVariable) throw StructuralError("postcondition may only mention situation variable s");
  for (const auto& a : tasks::operations(tau))
    if (!a.ground()) throw GroundingError("operation " + a.name + " has unground arguments");
  return {wpImpl(prepare(phi, theory, mode), tau, theory, mode), tau};
}

std::vector<WorldState> satisfying(const Formula& wpFormula, const ActionTheory& theory,
                                   const std::vector<WorldState>& worlds) {
  std::vector<WorldState> out;
  if (wpFormula.kind() == FormulaKind::False) return out;
  for (const auto& w : worlds)
    if (action::holds(theory, action::computeDerived(theory, w), wpFormula)) out.push_back(w);
  return out;
}

std::vector<WorldState> accomplishable(const Task& tau, const ActionTheory& theory) {
  return satisfying(wp(Formula::top(), tau, theory).formula, theory, action::enumerateInitialWorlds(theory));
}

}  // namespace robotval::regression
