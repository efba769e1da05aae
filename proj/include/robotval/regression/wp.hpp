#pragma once

#include <vector>

#include "robotval/action/theory.hpp"
#include "robotval/logic/formula.hpp"
#include "robotval/tasks/task.hpp"

namespace robotval::regression {

using action::ActionTheory;
using action::WorldState;
using logic::Formula;
using tasks::Task;

/// One regression step: every primitive fluent atom at do(a, s) becomes
/// gamma+ | (F@s & !gamma-) with the ground action a bound. Atoms at other
/// situations are left alone; a fluent nested under two `do` terms raises
/// StructuralError, a derived fluent under `do` raises StructuralError too.
Formula regress(const Formula& phi, const ActionTheory& theory);

/// Poss(a, s) with the precondition instantiated and derived fluents unfolded.
Formula possFormula(const ActionTheory& theory, const logic::Action& a);

enum class WpMode {
  Symbolic,  ///< quantifiers kept
  Ground,    ///< quantifiers expanded over the finite domains before regression
};

struct WpResult {
  Formula formula;
  Task sourceTask;
};

/// Weakest precondition of `tau` for postcondition `phi` (situation variable s),
/// simplified by constant folding.
WpResult wp(const Formula& phi, const Task& tau, const ActionTheory& theory, WpMode mode = WpMode::Ground);

/// Initial worlds satisfying WP(true, tau), in enumeration order.
std::vector<WorldState> accomplishable(const Task& tau, const ActionTheory& theory);

/// Initial worlds (from `worlds`) satisfying a WP formula.
std::vector<WorldState> satisfying(const Formula& wpFormula, const ActionTheory& theory,
                                   const std::vector<WorldState>& worlds);

}  // namespace robotval::regression
