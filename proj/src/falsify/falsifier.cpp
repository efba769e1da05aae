#include "robotval/falsify/falsifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "robotval/errors.hpp"
#include "robotval/stl/monitor.hpp"

namespace robotval::falsify {

std::string statusName(Status s) { return s == Status::Falsified ? "falsified" : "passed-budget-exhausted"; }

namespace {

/// Portable draws: the standard distributions differ between library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double normal() {
    if (spare_) {
      double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = 0;
    while (u1 <= 0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2 * std::log(u1));
    spare_ = r * std::sin(2 * M_PI * u2);
    return r * std::cos(2 * M_PI * u2);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
  std::optional<double> spare_;
};

constexpr double kInitialStep = 0.2;
constexpr double kMaxStep = 0.5;
constexpr double kMinStep = 1e-3;
constexpr std::size_t kStagnationLimit = 8;

class Search {
 public:
  Search(const System& sys, const FalsificationProblem& p) : sys_(sys), p_(p) {
    if (p.budget < 1) throw SetupError("falsification budget must be at least 1");
    if (p.spec.branches.empty()) throw SetupError("specification has no branch to execute");
    ops_ = p.spec.branches.front().operations;
    horizon_ = static_cast<double>(ops_.size()) * p.spec.deltaT;
    out_.dimension = sim::searchDimension(sys.scenario, sys.theory, p.config.initialWorld, sys.pmap);
  }

  FalsificationResult run() {
    Rng rng(p_.seed);
    const std::size_t d = out_.dimension;
    if (d == 0) {
      // A single concrete state; repeating it would only repeat the run.
      evaluate({});
      return finish();
    }

    const std::size_t batch = std::min(p_.budget, std::max<std::size_t>(4, 2 * d));
    std::vector<std::vector<std::size_t>> strata(d);
    for (auto& s : strata) {
      s.resize(batch);
      std::iota(s.begin(), s.end(), 0);
      for (std::size_t i = batch; i > 1; --i) std::swap(s[i - 1], s[rng.below(i)]);
    }
    std::vector<double> centre;
    double centreScore = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < batch && !done(); ++i) {
      std::vector<double> x(d);
      for (std::size_t k = 0; k < d; ++k) x[k] = (static_cast<double>(strata[k][i]) + rng.uniform()) / static_cast<double>(batch);
      double f = evaluate(x);
      if (f < centreScore) {
        centreScore = f;
        centre = x;
      }
    }

    double step = kInitialStep;
    std::size_t stagnant = 0, restarts = 0;
    while (!done()) {
      if (centre.empty() || step < kMinStep || stagnant >= kStagnationLimit) {
        if (!centre.empty() && restarts >= p_.restarts) {
          // Out of restarts: keep polishing the best point found.
          step = kInitialStep;
          stagnant = 0;
          centre = bestPoint_;
          centreScore = bestScore_;
        } else {
          ++restarts;
          std::vector<double> x(d);
          for (auto& v : x) v = rng.uniform();
          centreScore = evaluate(x);
          centre = x;
          step = kInitialStep;
          stagnant = 0;
          continue;
        }
      }
      std::vector<double> x(d);
      for (std::size_t k = 0; k < d; ++k) x[k] = std::clamp(centre[k] + step * rng.normal(), 0.0, 1.0);
      double f = evaluate(x);
      if (f < centreScore) {
        centre = x;
        centreScore = f;
        step = std::min(2 * step, kMaxStep);
        stagnant = 0;
      } else {
        step /= 2;
        ++stagnant;
      }
    }
    return finish();
  }

 private:
  bool done() const { return attempts_ >= p_.budget || out_.status == Status::Falsified; }

  /// Score to minimize; infeasible points score +inf.
  double evaluate(const std::vector<double>& x) {
    ++attempts_;
    Evaluation e;
    e.point = x;
    std::optional<sim::ScenarioSample> sample;
    try {
      sample = sim::instantiate(sys_.scenario, sys_.theory, p_.config.initialWorld, sys_.pmap, x);
    } catch (const InstantiationError&) {
      ++out_.infeasible;
      out_.log.push_back(std::move(e));
      return std::numeric_limits<double>::infinity();
    }
    sample->seed = p_.seed;
    auto run = sim::runPolicy(sys_.scenario, *sample, ops_, sys_.policy, sys_.scenario.dt, horizon_);
    auto rho = stl::robustness(p_.spec.formula, run.trace);
    ++out_.evaluations;
    e.feasible = true;
    e.robustness = rho.value;
    e.truncated = rho.truncated || run.truncated;
    const double score = e.truncated ? std::max(rho.value, 0.0) : rho.value;
    if (!out_.bestSample || score < bestScore_) {
      bestScore_ = score;
      bestPoint_ = x;
      out_.bestRobustness = score;
      out_.bestSample = std::move(sample);
      out_.bestTrace = std::move(run.trace);
      if (score < 0) out_.status = Status::Falsified;
    }
    out_.incumbent.push_back(out_.bestRobustness);
    out_.log.push_back(std::move(e));
    return score;
  }

  FalsificationResult finish() {
    if (!out_.bestSample)
      throw SetupError("no candidate initial state could be instantiated for " +
                       action::describe(sys_.theory, p_.config.initialWorld));
    return std::move(out_);
  }

  const System& sys_;
  const FalsificationProblem& p_;
  std::vector<logic::Action> ops_;
  double horizon_ = 0;
  std::size_t attempts_ = 0;
  double bestScore_ = std::numeric_limits<double>::infinity();
  std::vector<double> bestPoint_;
  FalsificationResult out_;
};

}  // namespace

FalsificationResult falsify(const System& system, const FalsificationProblem& problem) {
  return Search(system, problem).run();
}

CampaignReport campaign(const System& system, const std::vector<ct::Configuration>& configs,
                        const CampaignOptions& options) {
  CampaignReport report;
  report.entries.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      CampaignEntry& entry = report.entries[i];
      entry.index = i;
      entry.config = configs[i];
      try {
        FalsificationProblem p;
        p.config = configs[i];
        p.spec = stl::synthesize(system.theory, configs[i], system.pmap, options.deltaT);
        p.budget = options.budget;
        p.restarts = options.restarts;
        p.seed = options.seed + i;
        entry.formula = stl::print(p.spec.formula);
        entry.result = falsify(system, p);
      } catch (const Error& e) {
        entry.error = e.what();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, configs.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (auto& entry : report.entries) {
    if (!entry.result) {
      ++report.errors;
      continue;
    }
    auto& r = *entry.result;
    if (r.status == Status::Falsified) {
      ++report.falsified;
      if (!options.traceDir.empty() && r.bestTrace) {
        std::filesystem::create_directories(options.traceDir);
        const std::string name = "trace_" + std::to_string(entry.index) + ".csv";
        std::ofstream out(options.traceDir / name, std::ios::binary);
        if (!out) throw SetupError("cannot write " + (options.traceDir / name).string());
        out << stl::toCsv(*r.bestTrace);
        r.traceRef = name;
      }
    } else {
      ++report.passed;
    }
  }
  return report;
}

}  // namespace robotval::falsify
