#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "robotval/errors.hpp"
#include "robotval/pipeline/pipeline.hpp"
#include "robotval/sim/kitchen.hpp"
#include "robotval/stl/monitor.hpp"

using namespace robotval;

namespace {

const pipeline::Model& kitchen() {
  static const pipeline::Model m = pipeline::loadModel(oracle::modelPath("kitchen4.sc"));
  return m;
}

const stl::PredicateMap& pmap() {
  static const stl::PredicateMap p = stl::loadPredicateMap(oracle::modelPath("kitchen4.pmap").string());
  return p;
}

const sim::Scenario& scenario() {
  static const sim::Scenario s = sim::loadScenario(oracle::modelPath("kitchen.json").string());
  return s;
}

action::WorldState world(std::vector<logic::GroundAtom> atoms) {
  return action::worldFromAtoms(kitchen().theory(), atoms);
}

/// Bowl on plate on table, microwave closed.
action::WorldState closedMicrowave() {
  return world({{"Loc", {"o_b", "o_p"}}, {"Loc", {"o_p", "o_t"}}, {"IsOpen", {"o_b"}}, {"IsOpen", {"o_p"}},
                {"IsOpen", {"o_t"}}});
}

/// Bowl on table next to the plate, microwave open.
action::WorldState openMicrowave() {
  return world({{"Loc", {"o_b", "o_t"}}, {"Loc", {"o_p", "o_t"}}, {"IsOpen", {"o_b"}}, {"IsOpen", {"o_m"}},
                {"IsOpen", {"o_p"}}, {"IsOpen", {"o_t"}}});
}

std::vector<logic::Action> ops(std::initializer_list<const char*> text) {
  std::vector<logic::Action> out;
  for (const char* t : text) {
    auto task = tasks::parseTask(t, kitchen().theory().vocabulary());
    out.push_back(task.action());
  }
  return out;
}

sim::ScenarioSample sampleAt(const action::WorldState& w, double v) {
  std::vector<double> p(sim::searchDimension(scenario(), kitchen().theory(), w, pmap()), v);
  return sim::instantiate(scenario(), kitchen().theory(), w, pmap(), p);
}

double finalValue(const stl::Trace& tr, const std::string& signal) { return tr.column(signal).back(); }

}  // namespace

TEST(Scenario, ParsesAndValidates) {
  const auto& s = scenario();
  ASSERT_EQ(s.objects.size(), 4u);
  EXPECT_TRUE(s.object("o_m").door);
  EXPECT_TRUE(s.object("o_t").fixed);
  EXPECT_EQ(s.dt, 0.05);
  EXPECT_THROW(s.object("o_x"), ModelError);

  EXPECT_THROW(sim::parseScenario("{"), ParseError);
  EXPECT_THROW(sim::parseScenario(R"({"version":2,"objects":[]})"), ParseError);
  EXPECT_THROW(sim::parseScenario(R"({"version":1,"objects":[{"name":"a","fixed":true}]})"), ParseError);
  EXPECT_THROW(sim::parseScenario(R"({"version":1,"objects":[{"name":"a"},{"name":"a"}]})"), ParseError);
  EXPECT_THROW(sim::parseScenario(R"({"version":1,"objects":[],"policy":{"doorTorqueLimit":5}})"), Error);
}

TEST(Scenario, SignalColumns) {
  auto names = sim::signalNames(scenario());
  EXPECT_EQ(names.size(), 4u + 4u + 16u + 16u);
  EXPECT_EQ(names.front(), "door:o_b");
  EXPECT_EQ(names.back(), "reach:o_t:o_t");
}

TEST(Instantiate, DimensionCountsPlacementsAndSampledScalars) {
  // Two placed objects and one closed door sampled from its false interval.
  EXPECT_EQ(sim::searchDimension(scenario(), kitchen().theory(), closedMicrowave(), pmap()), 5u);
  auto s = sampleAt(closedMicrowave(), 0.5);
  const auto m = scenario().objectIndex("o_m");
  EXPECT_DOUBLE_EQ(s.q0.objects[m].door, 0.5);
  EXPECT_EQ(s.q0.objects[scenario().objectIndex("o_b")].door, 180);
  EXPECT_THROW(sim::instantiate(scenario(), kitchen().theory(), closedMicrowave(), pmap(), std::vector<double>(2, 0.5)),
               SetupError);
}

TEST(Instantiate, RandomPointsRealizeTheAbstractWorld) {
  const auto& t = kitchen().theory();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  const auto worlds = action::enumerateInitialWorlds(t);
  std::size_t realized = 0;
  for (int n = 0; n < 100; ++n) {
    const auto& w = oracle::pick(rng, worlds);
    std::vector<double> p(sim::searchDimension(scenario(), t, w, pmap()));
    for (auto& x : p) x = u(rng);
    sim::ScenarioSample s;
    try {
      s = sim::instantiate(scenario(), t, w, pmap(), p);
    } catch (const InstantiationError&) {
      continue;
    }
    ++realized;
    auto values = sim::observe(scenario(), s.q0);
    std::vector<std::vector<double>> cols;
    for (double v : values) cols.push_back({v});
    stl::Trace snapshot({0.0}, sim::signalNames(scenario()), cols);
    auto c = stl::chi(t, action::computeDerived(t, w), pmap());
    ASSERT_TRUE(stl::satisfies(c, snapshot).value) << action::describe(t, w);
  }
  EXPECT_GT(realized, 50u);
}

TEST(Instantiate, ObjectsWithinTheMarginAreRejected) {
  // Bowl and plate side by side at the table centre: the bowl is 0.06 below the
  // plate top, which a 0.1 margin treats as resting on it.
  sim::Scenario wide = scenario();
  wide.margin = 0.1;
  const auto w = openMicrowave();
  std::vector<double> centre(sim::searchDimension(wide, kitchen().theory(), w, pmap()), 0.5);
  try {
    sim::instantiate(wide, kitchen().theory(), w, pmap(), centre);
    FAIL();
  } catch (const InstantiationError& e) {
    EXPECT_NE(std::string(e.what()).find("gap(o_b,o_p)"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(sim::instantiate(scenario(), kitchen().theory(), w, pmap(), centre));
}

TEST(RunPolicy, Deterministic) {
  auto s = sampleAt(closedMicrowave(), 0.3);
  auto o = ops({"open(o_m)", "put(o_p,o_m)", "close(o_m)"});
  auto a = sim::runPolicy(scenario(), s, o, scenario().policy, 0.05, 20);
  auto b = sim::runPolicy(scenario(), s, o, scenario().policy, 0.05, 20);
  EXPECT_EQ(stl::toCsv(a.trace), stl::toCsv(b.trace));
  EXPECT_FALSE(a.truncated);
}

TEST(RunPolicy, PutEndsInsideTheTarget) {
  auto s = sampleAt(openMicrowave(), 0.0);
  auto r = sim::runPolicy(scenario(), s, ops({"put(o_b,o_m)"}), scenario().policy, 0.05, 8);
  ASSERT_FALSE(r.truncated);
  EXPECT_LE(finalValue(r.trace, "gap:o_b:o_m"), 1e-9);
  EXPECT_GT(finalValue(r.trace, "gap:o_b:o_t"), scenario().margin);
}

TEST(RunPolicy, CarriedObjectsMoveWithTheirSupport) {
  auto s = sampleAt(closedMicrowave(), 0.3);
  auto r = sim::runPolicy(scenario(), s, ops({"open(o_m)", "put(o_p,o_m)"}), scenario().policy, 0.05, 16);
  ASSERT_FALSE(r.truncated);
  EXPECT_LE(finalValue(r.trace, "gap:o_p:o_m"), 1e-9);
  EXPECT_LE(finalValue(r.trace, "gap:o_b:o_p"), 1e-9);
  EXPECT_LE(finalValue(r.trace, "reach:o_b:o_m"), 1e-9);
}

TEST(RunPolicy, HealthyDoorOpensWithinTheWindow) {
  auto s = sampleAt(closedMicrowave(), 0.5);
  auto r = sim::runPolicy(scenario(), s, ops({"open(o_m)"}), scenario().policy, 0.05, pmap().deltaT);
  const auto& door = r.trace.column("door:o_m");
  EXPECT_GT(*std::max_element(door.begin(), door.end()), 80);
  EXPECT_FALSE(r.truncated);
}

TEST(RunPolicy, WeakMotorStallsBelowTheThreshold) {
  auto s = sampleAt(closedMicrowave(), 0.5);
  sim::PolicyConfig weak = scenario().policy;
  weak.doorTorqueLimit = 0.5;
  auto r = sim::runPolicy(scenario(), s, ops({"open(o_m)"}), weak, 0.05, pmap().deltaT);
  EXPECT_NEAR(finalValue(r.trace, "door:o_m"), 50, 1e-9);
}

TEST(RunPolicy, GraspFailureLeavesTheObject) {
  auto s = sampleAt(openMicrowave(), 0.0);
  sim::PolicyConfig slippery = scenario().policy;
  slippery.graspSuccessMargin = -0.01;
  auto r = sim::runPolicy(scenario(), s, ops({"put(o_b,o_m)"}), slippery, 0.05, 8);
  EXPECT_LE(finalValue(r.trace, "gap:o_b:o_t"), 1e-9);
  EXPECT_GT(finalValue(r.trace, "gap:o_b:o_m"), 0.5);
}

TEST(RunPolicy, ZeroHorizonAndTruncation) {
  auto s = sampleAt(closedMicrowave(), 0.5);
  auto empty = sim::runPolicy(scenario(), s, {}, scenario().policy, 0.05, 0);
  EXPECT_EQ(empty.trace.size(), 1u);
  EXPECT_FALSE(empty.truncated);
  auto cut = sim::runPolicy(scenario(), s, ops({"open(o_m)"}), scenario().policy, 0.05, 0.5);
  EXPECT_TRUE(cut.truncated);
  EXPECT_NEAR(cut.trace.end(), 0.5, 1e-9);
  sim::PolicyConfig slow = scenario().policy;
  slow.timingScale = 10;
  EXPECT_TRUE(sim::runPolicy(scenario(), s, ops({"open(o_m)"}), slow, 0.05, pmap().deltaT).truncated);
}
