#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robotval/action/theory.hpp"
#include "robotval/stl/synthesis.hpp"
#include "robotval/stl/trace.hpp"

namespace robotval::sim {

using Vec3 = std::array<double, 3>;

struct ObjectSpec {
  std::string name;
  Vec3 size{0.1, 0.1, 0.1};
  std::optional<Vec3> position;  ///< bottom centre; required for fixed objects
  bool fixed = false;            ///< never moved by the robot
  bool door = false;
  double supportHeight = 0;      ///< height of the surface others rest on, above the bottom
  std::array<double, 2> surface{0.1, 0.1};  ///< extent of that surface in x and y
};

/// Fault knobs of the scripted robot.
struct PolicyConfig {
  double graspSuccessMargin = 0.01;  ///< m; below zero the gripper loses the object
  double doorTorqueLimit = 1.0;      ///< door stalls at 100 * limit degrees
  double timingScale = 1.0;          ///< every motion takes this many times longer

  void check() const;  ///< throws SetupError outside the declared ranges
};

struct ControllerConfig {
  double liftHeight = 0.15;   ///< m
  double travelSpeed = 0.5;   ///< m/s
  double doorSpeed = 60;      ///< deg/s
  double doorTarget = 95;     ///< deg
  double turnOnTime = 0.3;    ///< s
  double settleTime = 0.2;    ///< s, idle after every operation
};

struct Scenario {
  int version = 1;
  Vec3 workspaceMin{-1, -1, 0};
  Vec3 workspaceMax{1, 1, 2};
  double dt = 0.05;      ///< s between trace samples
  double margin = 0.05;  ///< m; minimum gap between objects that are not located on each other
  std::vector<ObjectSpec> objects;
  PolicyConfig policy;
  ControllerConfig controller;

  const ObjectSpec& object(const std::string& name) const;  ///< throws ModelError
  std::size_t objectIndex(const std::string& name) const;
};

/// JSON: {"version":1, "workspace":{"min":[..],"max":[..]}, "dt":.., "margin":..,
/// "objects":[{"name":..,"size":[..],"position":[..],"fixed":..,"door":..,
/// "supportHeight":..,"surface":[..]}], "policy":{..}, "controller":{..}}.
Scenario parseScenario(const std::string& json);
Scenario loadScenario(const std::string& path);

struct ObjectState {
  Vec3 position{};  ///< bottom centre
  double door = 180;  ///< degrees; objects without a door stay at 180
  double running = 0;
};

/// One state per scenario object, in scenario order.
struct ConcreteState {
  std::vector<ObjectState> objects;
};

struct ScenarioSample {
  ConcreteState q0;
  std::vector<double> point;  ///< the unit-box point it came from
  std::uint64_t seed = 0;
  std::map<std::string, stl::Interval> boundsUsed;  ///< per sampled signal
};

/// Signal names in trace column order: door, running, gap, reach.
std::vector<std::string> signalNames(const Scenario& scenario);

/// Signal values of a state. gap(o,o2) is how far o is from resting on o2's
/// surface; reach(o,o2) the smallest largest gap over chains o -> ... -> o2.
std::vector<double> observe(const Scenario& scenario, const ConcreteState& q);

/// Dimension of the unit box for w0: two placement coordinates per located
/// object, one per sampled scalar (door angles with a non-degenerate interval).
std::size_t searchDimension(const Scenario& scenario, const action::ActionTheory& theory, const action::WorldState& w0,
                            const stl::PredicateMap& pmap);

/// Concrete initial state for w0 at a unit-box point. Throws InstantiationError
/// listing every violated constraint when the state would not realize w0.
ScenarioSample instantiate(const Scenario& scenario, const action::ActionTheory& theory, const action::WorldState& w0,
                           const stl::PredicateMap& pmap, std::span<const double> point);

struct RunResult {
  stl::Trace trace;
  bool truncated = false;  ///< operations were still running at the horizon
};

/// Runs the scripted controllers for the operations in order and samples every
/// dt seconds from 0 to the horizon.
RunResult runPolicy(const Scenario& scenario, const ScenarioSample& sample, std::span<const logic::Action> ops,
                    const PolicyConfig& policy, double dt, double horizon);

}  // namespace robotval::sim
