// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "oracles.hpp"
#include "robotval/logic/syntax.hpp"
#include "robotval/pipeline/pipeline.hpp"
#include "robotval/regression/wp.hpp"
#include "robotval/stl/monitor.hpp"

using namespace robotval;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const pipeline::Model& kitchen() {
  static const pipeline::Model m = pipeline::loadModel(oracle::modelPath("kitchen4.sc"));
  return m;
}

const std::vector<action::WorldState>& worlds() {
  static const auto w = action::enumerateInitialWorlds(kitchen().theory());
  return w;
}

bool holds(const logic::Formula& f, const action::WorldState& w) {
  const auto& t = kitchen().theory();
  return action::holds(t, action::computeDerived(t, w), f);
}

Outcome wpExamples() {
  const auto& t = kitchen().theory();
  const auto vocab = t.vocabulary();
  auto openClose = logic::parseFormula(pipeline::wpText(kitchen(), "[open(o_m);close(o_m)]"), vocab);
  auto expected = logic::parseFormula("!IsOpen(o_m)@s & !Running(o_m)@s", vocab);
  auto openOpen = pipeline::wpText(kitchen(), "[open(o_m);open(o_m)]");
  std::size_t differ = 0;
  for (const auto& w : worlds()) differ += holds(openClose, w) != holds(expected, w);
  std::ostringstream d;
  d << "open;close = " << logic::print(openClose) << ", open;open = " << openOpen << ", " << differ << " of "
    << worlds().size() << " worlds differ";
  return {differ == 0 && openClose == expected && openOpen == "false", d.str()};
}

Outcome wpMatchesExecution() {
  const auto& m = kitchen();
  std::size_t tasksChecked = 0, mismatches = 0;
  for (const auto& d : tasks::enumerateDerivations(m.grammar, 6, m.theory().vocabulary())) {
    auto w = regression::wp(logic::Formula::top(), d.task, m.theory()).formula;
    for (const auto& w0 : worlds()) mismatches += holds(w, w0) != oracle::completes(m.theory(), w0, d.task);
    ++tasksChecked;
  }
  std::ostringstream d;
  d << tasksChecked << " tasks x " << worlds().size() << " worlds, " << mismatches << " mismatches";
  return {mismatches == 0 && tasksChecked > 0, d.str()};
}

Outcome putFragment() {
  auto m = pipeline::loadModel(oracle::modelPath("put_fragment.sc"));
  auto full = pipeline::generate(m, 3, std::nullopt);
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  for (const auto& c : full.configs) {
    const auto& op = c.task.action();
    for (const auto& atom : action::trueAtoms(m.theory(), c.initialWorld))
      if (atom.name == "Loc" && atom.args[0] == op.args[0].name())
        triples.emplace(atom.args[0], atom.args[1], op.args[1].name());
  }
  auto oneWay = pipeline::generate(m, 3, 1);
  std::ostringstream d;
  d << triples.size() << " distinct (object, support, destination) combinations over " << full.configs.size()
    << " full assignments, 1-way array of " << oneWay.configs.size() << " rows";
  return {triples.size() == 8 && oneWay.configs.size() == 3, d.str()};
}

Outcome coveringArrays() {
  const auto& m = kitchen();
  auto model = ct::buildModel(m.theory(), m.grammar, 4);
  auto valid = oracle::validAssignments(model, m.theory(), m.grammar, 4);
  bool ok = true;
  std::size_t previous = 0;
  std::ostringstream d;
  for (std::size_t t = 1; t <= 3; ++t) {
    auto r = ct::generateCoveringArray(model, t);
    auto check = oracle::checkCoverage(model, r.rows, valid, t);
    ok = ok && check.sound && check.missed == 0 && check.coverable == r.coverableTuples && r.rows.size() >= previous;
    previous = r.rows.size();
    d << "t=" << t << ": " << r.rows.size() << " rows, " << check.coverable << " tuples, " << check.missed
      << " missed" << (check.sound ? "" : ", unsound") << (t < 3 ? "; " : "");
  }
  return {ok, d.str()};
}

Outcome duality() {
  const auto& t = kitchen().theory();
  std::mt19937_64 rng(2024);
  const auto actions = t.groundActions();
  auto s = logic::Situation::variable("s");
  std::size_t checked = 0, mismatches = 0;
  while (checked < 200) {
    const auto& w = oracle::pick(rng, worlds());
    const auto& a = actions[rng() % actions.size()];
    if (!action::possible(t, w, a)) continue;
    auto next = oracle::randomFluentFormula(rng, t, logic::Situation::doing(a, s), 3);
    auto here = logic::mapFluents(next, [&](const logic::Formula& f) {
      return logic::Formula::fluent(f.symbol(), f.terms(), s);
    });
    mismatches += holds(regression::regress(next, t), w) != holds(here, action::progress(t, w, a));
    ++checked;
  }
  std::ostringstream d;
  d << checked << " triples, " << mismatches << " mismatches";
  return {mismatches == 0, d.str()};
}

Outcome robustnessSemantics() {
  using stl::Comparator;
  using stl::StlFormula;
  std::mt19937_64 rng(5);
  const std::vector<std::string> sigs{"u", "v", "w"};
  std::size_t signMismatch = 0, dualMismatch = 0;
  for (int n = 0; n < 500; ++n) {
    auto phi = oracle::randomStl(rng, sigs, 4, 3);
    auto tr = oracle::randomTrace(rng, sigs, 0.25, 15);
    signMismatch += stl::satisfies(phi, tr).value != (stl::robustness(phi, tr).value >= 0);
    double a = static_cast<double>(rng() % 3), b = a + static_cast<double>(rng() % 3);
    dualMismatch += stl::robustness(StlFormula::always(a, b, phi), tr).value !=
                    -stl::robustness(StlFormula::eventually(a, b, StlFormula::negation(phi)), tr).value;
  }
  stl::Trace tr({0, 1, 2, 3, 4}, {"x"}, {{1, 3, -2, 5, 0}});
  auto x = [](Comparator c, double v) { return StlFormula::atom("x", c, v); };
  const double hand[] = {
      stl::robustness(StlFormula::eventually(1, 2, x(Comparator::Greater, 0)), tr).value - 3,
      stl::robustness(StlFormula::always(0, 3, x(Comparator::Greater, 0)), tr).value + 2,
      stl::robustness(StlFormula::until(2, 3, x(Comparator::Greater, -3), x(Comparator::Greater, 4)), tr).value - 1,
  };
  bool handOk = true;
  for (double e : hand) handOk = handOk && std::abs(e) <= 1e-9;
  std::ostringstream d;
  d << "500 pairs, " << signMismatch << " sign mismatches, " << dualMismatch << " duality mismatches, hand windows "
    << (handOk ? "match" : "differ");
  return {signMismatch == 0 && dualMismatch == 0 && handOk, d.str()};
}

Outcome coverageTable() {
  std::vector<pipeline::TableRow> rows;
  for (std::size_t K : {4u, 6u, 8u}) rows.push_back(pipeline::tableRow(kitchen(), K, {1, 2, 3}));
  const auto text = pipeline::formatTable(rows);
  bool ok = text == pipeline::readFile(oracle::sourceDir() / "tests/golden/coverage_counts.txt");
  for (const auto& r : rows) ok = ok && r.accomplishable <= r.syntaxValid;
  ok = ok && rows[0].accomplishable < rows[0].syntaxValid;
  std::cout << text;
  return {ok, ok ? "matches golden counts" : "differs from golden counts"};
}

Outcome endToEnd() {
  const auto& m = kitchen();
  auto scenario = sim::loadScenario(oracle::modelPath("kitchen.json").string());
  auto pmap = stl::loadPredicateMap(oracle::modelPath("kitchen4.pmap").string());
  auto configs = pipeline::generate(m, 4, std::nullopt).configs;

  // Configurations that actually execute open on their own initial world.
  std::vector<bool> opens(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    auto spec = stl::synthesize(m.theory(), configs[i], pmap);
    for (const auto& b : spec.branches)
      for (const auto& op : b.operations) opens[i] = opens[i] || op.name == "open";
  }

  auto run = [&](double torque) {
    sim::PolicyConfig p = scenario.policy;
    p.doorTorqueLimit = torque;
    falsify::System sys{m.theory(), scenario, pmap, p};
    return falsify::campaign(sys, configs, {100, 4, 0, 1, std::nullopt, {}});
  };
  auto faulty = run(0.5);
  auto healthy = run(1.0);

  bool ok = faulty.errors == 0 && healthy.errors == 0 && healthy.falsified == 0;
  std::size_t openCount = 0, maxEvals = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    openCount += opens[i];
    const auto& f = faulty.entries[i].result;
    const auto& h = healthy.entries[i].result;
    if (!f || !h) continue;
    ok = ok && (f->status == falsify::Status::Falsified) == opens[i];
    maxEvals = std::max({maxEvals, f->evaluations, h->evaluations});
  }
  ok = ok && maxEvals <= 100;
  std::ostringstream d;
  d << "fault: " << faulty.falsified << " of " << configs.size() << " falsified (" << openCount
    << " open the door); healthy: " << healthy.falsified << " falsified; at most " << maxEvals << " simulations";
  return {ok, d.str()};
}

Outcome determinism() {
  auto base = std::filesystem::temp_directory_path() / "robotval_acceptance";
  std::filesystem::remove_all(base);
  auto once = [&](const std::string& name) {
    pipeline::ValidateOptions o;
    o.model = oracle::modelPath("kitchen4.sc");
    o.scenario = oracle::modelPath("kitchen.json");
    o.pmap = oracle::modelPath("kitchen4.pmap");
    o.strength = 2;
    o.campaign.budget = 30;
    o.campaign.seed = 42;
    o.campaign.policy.doorTorqueLimit = 0.5;
    o.policyFromScenario = false;
    o.out = base / name;
    pipeline::validate(o);
    return std::pair{pipeline::readFile(o.out / "configs.jsonl"), pipeline::readFile(o.out / "report.json")};
  };
  auto a = once("a");
  auto b = once("b");
  std::filesystem::remove_all(base);
  bool same = a == b;
  return {same, same ? "configs.jsonl and report.json byte-identical" : "outputs differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"wp examples", wpExamples},
      {"wp agrees with execution (depth <= 6)", wpMatchesExecution},
      {"put fragment combinations and 1-way array", putFragment},
      {"covering arrays sound and complete (t = 1..3)", coveringArrays},
      {"regression/progression duality", duality},
      {"robustness semantics", robustnessSemantics},
      {"coverage table at K = 4, 6, 8", coverageTable},
      {"seeded falsification with door fault", endToEnd},
      {"validate is deterministic", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
