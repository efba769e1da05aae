#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robotval/action/theory.hpp"
#include "robotval/ct/model.hpp"
#include "robotval/stl/formula.hpp"

namespace robotval::stl {

/// A real interval with open or closed ends, e.g. `[80,180]` or `[0,1)`.
struct Interval {
  double lo = 0;
  double hi = 0;
  bool loOpen = false;
  bool hiOpen = false;

  bool contains(double v) const;
  /// lo + u (hi - lo), kept inside open ends.
  double at(double u) const;
  bool degenerate() const { return lo == hi; }
};

/// Maps a fluent family onto `signal(params) cmp threshold`. The optional
/// intervals say which signal values realize the fluent being true or false.
struct PredicateTemplate {
  std::string fluent;
  std::vector<std::string> params;
  std::string signal;
  std::vector<std::string> signalArgs;  ///< each one of params
  Comparator comparator = Comparator::Greater;
  double threshold = 0;
  std::optional<Interval> whenTrue;
  std::optional<Interval> whenFalse;
};

class PredicateMap {
 public:
  double deltaT = 0;  ///< seconds allowed per operation
  std::map<std::string, PredicateTemplate> templates;

  const PredicateTemplate* find(const std::string& fluent) const;
  /// Signal name for a ground instance: `gap:o_b:o_m`.
  std::string signalName(const std::string& fluent, const std::vector<std::string>& args) const;
  /// p_{F,o}: the atom for a ground fluent instance; throws SynthesisError if unmapped.
  StlFormula predicate(const std::string& fluent, const std::vector<std::string>& args) const;
};

/// Lines of the form
///   deltat: 8
///   IsOpen(o) := door(o) > 80 ; true (80,180] ; false [0,1)
/// with `#` comments. Throws ParseError with line numbers.
PredicateMap parsePredicateMap(std::string_view text);
PredicateMap loadPredicateMap(const std::string& path);

/// Propositional encoding of a world: p for every true fluent instance and
/// !p for every false one, primitive families first, then derived.
StlFormula chi(const action::ActionTheory& theory, const action::DerivedState& w, const PredicateMap& pmap);

struct BranchSpec {
  std::vector<logic::Action> operations;
  std::vector<action::WorldState> worlds;  ///< w_1..w_n after each operation
  std::vector<StlFormula> checkpoints;     ///< chi(w_i)
  StlFormula formula;
};

struct SpecSynthesisResult {
  StlFormula formula;
  std::vector<BranchSpec> branches;  ///< accomplishable branches, distinct operation sequences
  double deltaT = 0;
};

/// F[0,dt](chi_1 & F[0,dt](chi_2 & ...)) per branch that w0 can accomplish,
/// joined by disjunction.
SpecSynthesisResult synthesize(const action::ActionTheory& theory, const action::WorldState& w0, const tasks::Task& tau,
                               const PredicateMap& pmap, std::optional<double> deltaT = std::nullopt);
SpecSynthesisResult synthesize(const action::ActionTheory& theory, const ct::Configuration& config,
                               const PredicateMap& pmap, std::optional<double> deltaT = std::nullopt);

}  // namespace robotval::stl
