#pragma once

// Reference implementations the tests compare the library against. They are
// deliberately naive: exhaustive enumeration, direct recursion, no caching.

#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "robotval/action/theory.hpp"
#include "robotval/ct/model.hpp"
#include "robotval/stl/formula.hpp"
#include "robotval/stl/trace.hpp"
#include "robotval/tasks/grammar.hpp"

namespace oracle {

using robotval::action::ActionTheory;
using robotval::action::WorldState;

std::filesystem::path sourceDir();
std::filesystem::path modelPath(const std::string& name);  ///< models/<name>

/// Final worlds of every complete run of tau from w, computed by structural
/// recursion over the program with progression for operations.
std::vector<WorldState> runs(const ActionTheory& theory, const WorldState& w, const robotval::tasks::Task& tau);
bool completes(const ActionTheory& theory, const WorldState& w, const robotval::tasks::Task& tau);

/// Every assignment to the primitive fluents that satisfies the initial axioms,
/// found by trying all 2^n of them.
std::vector<WorldState> initialWorldsBruteForce(const ActionTheory& theory);

/// Transitive closure of a binary primitive fluent by Floyd-Warshall.
std::set<std::pair<std::string, std::string>> closure(const ActionTheory& theory, const WorldState& w,
                                                      const std::string& fluent);

/// Canonical assignments of every (w0, derivation) where w0 is an initial world
/// and the derived task completes from w0.
std::set<robotval::ct::Assignment> validAssignments(const robotval::ct::CtModel& model, const ActionTheory& theory,
                                                    const robotval::tasks::Grammar& grammar, std::size_t K);

struct CoverageCheck {
  bool sound = true;          ///< every row is a valid assignment
  std::size_t coverable = 0;  ///< t-tuples occurring in some valid assignment
  std::size_t missed = 0;     ///< coverable t-tuples no row covers
  std::string firstProblem;
};

/// Checks rows against the valid set: soundness and t-way coverage.
CoverageCheck checkCoverage(const robotval::ct::CtModel& model, const std::vector<robotval::ct::Assignment>& rows,
                            const std::set<robotval::ct::Assignment>& valid, std::size_t t);

/// Robustness by direct recursion over the definition, no memo, no snapping.
double robustness(const robotval::stl::StlFormula& phi, const robotval::stl::Trace& trace, double t);
bool satisfied(const robotval::stl::StlFormula& phi, const robotval::stl::Trace& trace, double t);

/// Random formula over the given signals, temporal bounds integral within [0, maxBound].
robotval::stl::StlFormula randomStl(std::mt19937_64& rng, const std::vector<std::string>& signals, int depth,
                                    int maxBound);
/// Random trace sampled every dt over [0, horizon] with values in [-10, 10].
robotval::stl::Trace randomTrace(std::mt19937_64& rng, const std::vector<std::string>& signals, double dt,
                                 double horizon);

/// Random quantifier-free formula over ground primitive fluents at situation `s`.
robotval::logic::Formula randomFluentFormula(std::mt19937_64& rng, const ActionTheory& theory,
                                             const robotval::logic::Situation& s, int depth);

/// Uniformly chosen world among `worlds`.
const WorldState& pick(std::mt19937_64& rng, const std::vector<WorldState>& worlds);

}  // namespace oracle
