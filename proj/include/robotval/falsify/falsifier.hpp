#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "robotval/ct/model.hpp"
#include "robotval/sim/kitchen.hpp"
#include "robotval/stl/synthesis.hpp"

namespace robotval::falsify {

enum class Status { Falsified, PassedBudgetExhausted };

/// "falsified" or "passed-budget-exhausted".
std::string statusName(Status s);

/// The system under test: abstract model, concretization and robot.
struct System {
  const action::ActionTheory& theory;
  const sim::Scenario& scenario;
  const stl::PredicateMap& pmap;
  sim::PolicyConfig policy;
};

struct FalsificationProblem {
  ct::Configuration config;
  stl::SpecSynthesisResult spec;
  std::size_t budget = 100;   ///< simulations at most
  std::size_t restarts = 4;   ///< local-search restarts at most
  std::uint64_t seed = 0;
};

struct Evaluation {
  std::vector<double> point;
  bool feasible = false;
  double robustness = 0;  ///< raw value; meaningless when infeasible
  bool truncated = false;
};

struct FalsificationResult {
  Status status = Status::PassedBudgetExhausted;
  /// Best score seen. Truncated runs enter clamped at zero, so they can guide
  /// the search but never produce a negative best.
  double bestRobustness = 0;
  std::optional<sim::ScenarioSample> bestSample;
  std::optional<stl::Trace> bestTrace;
  std::size_t evaluations = 0;  ///< simulations run
  std::size_t infeasible = 0;   ///< candidates that could not be instantiated
  std::size_t dimension = 0;
  std::vector<Evaluation> log;      ///< every candidate in order
  std::vector<double> incumbent;    ///< bestRobustness after each simulation
  std::string traceRef;             ///< file the best trace was written to, if any
};

/// Searches the unit box for an initial state whose run violates the spec:
/// a Latin-hypercube batch, then adaptive (1+1) perturbation of the incumbent
/// with restarts. Stops at the first complete run with negative robustness.
/// Throws SetupError when no candidate can be instantiated.
FalsificationResult falsify(const System& system, const FalsificationProblem& problem);

struct CampaignOptions {
  std::size_t budget = 100;
  std::size_t restarts = 4;
  std::uint64_t seed = 0;  ///< configuration i is searched with seed + i
  std::size_t jobs = 1;
  std::optional<double> deltaT;  ///< overrides the predicate map
  std::filesystem::path traceDir;  ///< traces of falsified configurations go here when set
};

struct CampaignEntry {
  std::size_t index = 0;
  ct::Configuration config;
  std::string formula;
  std::optional<FalsificationResult> result;
  std::string error;  ///< set instead of result when the run failed
};

struct CampaignReport {
  std::vector<CampaignEntry> entries;
  std::size_t falsified = 0;
  std::size_t passed = 0;
  std::size_t errors = 0;
};

/// Falsifies every configuration; failures are recorded and the campaign goes on.
CampaignReport campaign(const System& system, const std::vector<ct::Configuration>& configs,
                        const CampaignOptions& options);

}  // namespace robotval::falsify
