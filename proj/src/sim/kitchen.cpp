#include "robotval/sim/kitchen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "robotval/errors.hpp"
#include "robotval/stl/monitor.hpp"

namespace robotval::sim {

using nlohmann::json;

void PolicyConfig::check() const {
  auto within = [](double v, double lo, double hi, const char* what) {
    if (!(v >= lo && v <= hi))
      throw SetupError(std::string(what) + " must lie in [" + stl::formatNumber(lo) + ", " + stl::formatNumber(hi) + "]");
  };
  within(graspSuccessMargin, -0.05, 0.05, "graspSuccessMargin");
  within(doorTorqueLimit, 0, 2, "doorTorqueLimit");
  within(timingScale, 0.1, 10, "timingScale");
}

const ObjectSpec& Scenario::object(const std::string& name) const { return objects[objectIndex(name)]; }

std::size_t Scenario::objectIndex(const std::string& name) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i].name == name) return i;
  throw ModelError("scenario has no object " + name);
}

namespace {

Vec3 readVec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ParseError(std::string(what) + " must be an array of three numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
void readOptional(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Scenario parseScenario(const std::string& text) {
  Scenario s;
  try {
    json j = json::parse(text);
    readOptional(j, "version", s.version);
    if (s.version != 1) throw ParseError("unsupported scenario version " + std::to_string(s.version));
    if (j.contains("workspace")) {
      s.workspaceMin = readVec3(j.at("workspace").at("min"), "workspace.min");
      s.workspaceMax = readVec3(j.at("workspace").at("max"), "workspace.max");
    }
    readOptional(j, "dt", s.dt);
    readOptional(j, "margin", s.margin);
    if (!(s.dt > 0)) throw ParseError("dt must be positive");
    for (const auto& o : j.at("objects")) {
      ObjectSpec spec;
      spec.name = o.at("name").get<std::string>();
      if (o.contains("size")) spec.size = readVec3(o.at("size"), "size");
      if (o.contains("position")) spec.position = readVec3(o.at("position"), "position");
      readOptional(o, "fixed", spec.fixed);
      readOptional(o, "door", spec.door);
      spec.supportHeight = spec.size[2];
      spec.surface = {spec.size[0], spec.size[1]};
      readOptional(o, "supportHeight", spec.supportHeight);
      if (o.contains("surface")) spec.surface = {o.at("surface").at(0).get<double>(), o.at("surface").at(1).get<double>()};
      if (spec.fixed && !spec.position) throw ParseError("fixed object " + spec.name + " needs a position");
      for (const auto& other : s.objects)
        if (other.name == spec.name) throw ParseError("object " + spec.name + " listed twice");
      s.objects.push_back(spec);
    }
    if (j.contains("policy")) {
      const auto& p = j.at("policy");
      readOptional(p, "graspSuccessMargin", s.policy.graspSuccessMargin);
      readOptional(p, "doorTorqueLimit", s.policy.doorTorqueLimit);
      readOptional(p, "timingScale", s.policy.timingScale);
    }
    if (j.contains("controller")) {
      const auto& c = j.at("controller");
      readOptional(c, "liftHeight", s.controller.liftHeight);
      readOptional(c, "travelSpeed", s.controller.travelSpeed);
      readOptional(c, "doorSpeed", s.controller.doorSpeed);
      readOptional(c, "doorTarget", s.controller.doorTarget);
      readOptional(c, "turnOnTime", s.controller.turnOnTime);
      readOptional(c, "settleTime", s.controller.settleTime);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  try {
    s.policy.check();
  } catch (const SetupError& e) {
    throw ParseError(std::string("scenario policy: ") + e.what());
  }
  return s;
}

Scenario loadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseScenario(ss.str());
}

std::vector<std::string> signalNames(const Scenario& scenario) {
  std::vector<std::string> out;
  for (const auto& o : scenario.objects) out.push_back("door:" + o.name);
  for (const auto& o : scenario.objects) out.push_back("running:" + o.name);
  for (const char* kind : {"gap:", "reach:"})
    for (const auto& a : scenario.objects)
      for (const auto& b : scenario.objects) out.push_back(kind + a.name + ":" + b.name);
  return out;
}

namespace {

constexpr double kSelfGap = 1.0;

double supportTop(const ObjectSpec& spec, const ObjectState& st) { return st.position[2] + spec.supportHeight; }

std::vector<std::vector<double>> gaps(const Scenario& sc, const ConcreteState& q) {
  const std::size_t n = sc.objects.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, kSelfGap));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& pi = q.objects[i].position;
      const auto& pj = q.objects[j].position;
      const auto& sj = sc.objects[j];
      const double vertical = std::abs(pi[2] - supportTop(sj, q.objects[j]));
      const double ex = std::max(0.0, std::abs(pi[0] - pj[0]) - sj.surface[0] / 2);
      const double ey = std::max(0.0, std::abs(pi[1] - pj[1]) - sj.surface[1] / 2);
      g[i][j] = std::max({vertical, ex, ey});
    }
  return g;
}

std::vector<std::vector<double>> reaches(std::vector<std::vector<double>> r) {
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i][j] = std::min(r[i][j], std::max(r[i][k], r[k][j]));
  return r;
}

}  // namespace

std::vector<double> observe(const Scenario& scenario, const ConcreteState& q) {
  std::vector<double> out;
  for (const auto& o : q.objects) out.push_back(o.door);
  for (const auto& o : q.objects) out.push_back(o.running);
  auto g = gaps(scenario, q);
  auto r = reaches(g);
  for (const auto& row : g) out.insert(out.end(), row.begin(), row.end());
  for (const auto& row : r) out.insert(out.end(), row.begin(), row.end());
  return out;
}

namespace {

/// What instantiation needs to know about w0, worked out once.
struct Plan {
  std::vector<std::optional<std::size_t>> support;  ///< per object: index of the object it rests on
  std::vector<std::size_t> placementOrder;          ///< supports before the objects on them
  struct Scalar {
    std::size_t object;
    std::string signal;  ///< "door" or "running"
    stl::Interval interval;
  };
  std::vector<Scalar> scalars;
  std::vector<std::string> problems;
  std::string gapFluent;  ///< family mapped onto gap, if any

  std::size_t placed() const {
    std::size_t n = 0;
    for (const auto& s : support) n += s.has_value() ? 1 : 0;
    return n;
  }
  std::size_t sampled() const {
    std::size_t n = 0;
    for (const auto& s : scalars) n += s.interval.degenerate() ? 0 : 1;
    return n;
  }
};

Plan makePlan(const Scenario& sc, const action::ActionTheory& theory, const action::WorldState& w0,
              const stl::PredicateMap& pmap) {
  Plan plan;
  const std::size_t n = sc.objects.size();
  plan.support.assign(n, std::nullopt);
  for (const auto& o : theory.objects()) sc.objectIndex(o);
  const auto& layout = theory.primitiveLayout();

  for (const auto& [fluent, t] : pmap.templates)
    if (t.signal == "gap" && t.params.size() == 2 && layout.find(fluent)) plan.gapFluent = fluent;
  if (!plan.gapFluent.empty()) {
    for (const auto& atom : action::trueAtoms(theory, w0)) {
      if (atom.name != plan.gapFluent) continue;
      const std::size_t o = sc.objectIndex(atom.args[0]);
      const std::size_t s = sc.objectIndex(atom.args[1]);
      if (sc.objects[o].fixed)
        plan.problems.push_back("fixed object " + atom.args[0] + " cannot be placed on " + atom.args[1]);
      else if (plan.support[o])
        plan.problems.push_back(atom.args[0] + " is located on two objects");
      else
        plan.support[o] = s;
    }
  }
  std::vector<int> mark(n, 0);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (mark[i] == 2) return;
    if (mark[i] == 1) {
      plan.problems.push_back("objects are located on each other in a cycle through " + sc.objects[i].name);
      return;
    }
    mark[i] = 1;
    if (plan.support[i]) visit(*plan.support[i]);
    mark[i] = 2;
    plan.placementOrder.push_back(i);
  };
  for (std::size_t i = 0; i < n; ++i) visit(i);

  for (const auto& [fluent, t] : pmap.templates) {
    if (t.params.size() != 1 || (t.signal != "door" && t.signal != "running") || !layout.find(fluent)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& spec = sc.objects[i];
      std::vector<std::string> args{spec.name};
      bool truth = false;
      try {
        truth = w0.get(layout.index(fluent, args));
      } catch (const ModelError&) {
        continue;  // scenario-only object
      }
      const auto& iv = truth ? t.whenTrue : t.whenFalse;
      if (!iv) {
        plan.problems.push_back("no " + std::string(truth ? "true" : "false") + " interval for " + fluent);
        continue;
      }
      if (t.signal == "door" && !spec.door) {
        if (!iv->contains(180)) plan.problems.push_back(fluent + "(" + spec.name + ") needs a door, which it lacks");
        continue;
      }
      plan.scalars.push_back({i, t.signal, *iv});
    }
  }
  return plan;
}

}  // namespace

std::size_t searchDimension(const Scenario& scenario, const action::ActionTheory& theory, const action::WorldState& w0,
                            const stl::PredicateMap& pmap) {
  Plan plan = makePlan(scenario, theory, w0, pmap);
  return 2 * plan.placed() + plan.sampled();
}

ScenarioSample instantiate(const Scenario& sc, const action::ActionTheory& theory, const action::WorldState& w0,
                           const stl::PredicateMap& pmap, std::span<const double> point) {
  Plan plan = makePlan(sc, theory, w0, pmap);
  const std::size_t d = 2 * plan.placed() + plan.sampled();
  if (point.size() != d)
    throw SetupError("sample point has " + std::to_string(point.size()) + " coordinates, expected " + std::to_string(d));
  std::vector<std::string> problems = plan.problems;

  ScenarioSample out;
  out.point.assign(point.begin(), point.end());
  const std::size_t n = sc.objects.size();
  out.q0.objects.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.q0.objects[i].door = sc.objects[i].door ? 0 : 180;
    if (sc.objects[i].position) out.q0.objects[i].position = *sc.objects[i].position;
  }

  // Placement coordinates are consumed in object order; positions are set supports first.
  std::vector<std::array<double, 2>> uv(n, {0.5, 0.5});
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (plan.support[i]) {
      uv[i] = {std::clamp(point[k], 0.0, 1.0), std::clamp(point[k + 1], 0.0, 1.0)};
      k += 2;
    }
  for (auto i : plan.placementOrder) {
    const auto& spec = sc.objects[i];
    if (!plan.support[i]) {
      if (!spec.position) problems.push_back(spec.name + " has neither a location nor a default position");
      continue;
    }
    const std::size_t s = *plan.support[i];
    const auto& base = out.q0.objects[s].position;
    const auto& surf = sc.objects[s].surface;
    const double lox = base[0] - 0.4 * surf[0], hix = base[0] + 0.4 * surf[0];
    const double loy = base[1] - 0.4 * surf[1], hiy = base[1] + 0.4 * surf[1];
    out.q0.objects[i].position = {lox + uv[i][0] * (hix - lox), loy + uv[i][1] * (hiy - loy),
                                  supportTop(sc.objects[s], out.q0.objects[s])};
    out.boundsUsed["x:" + spec.name] = {lox, hix, false, false};
    out.boundsUsed["y:" + spec.name] = {loy, hiy, false, false};
  }
  for (const auto& s : plan.scalars) {
    double v = s.interval.lo;
    if (!s.interval.degenerate()) v = s.interval.at(point[k++]);
    auto& st = out.q0.objects[s.object];
    (s.signal == "door" ? st.door : st.running) = v;
    out.boundsUsed[s.signal + ":" + sc.objects[s.object].name] = s.interval;
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < 3; ++a) {
      const double p = out.q0.objects[i].position[a];
      if (p < sc.workspaceMin[a] || p > sc.workspaceMax[a])
        problems.push_back(sc.objects[i].name + " lies outside the workspace");
    }

  if (problems.empty()) {
    // The state must realize every literal of w0, with the margin on absent locations.
    auto values = observe(sc, out.q0);
    auto names = signalNames(sc);
    std::vector<std::vector<double>> cols;
    for (double v : values) cols.push_back({v});
    stl::Trace snapshot({0.0}, names, cols);
    const auto derived = action::computeDerived(theory, w0);
    const stl::StlFormula c = stl::chi(theory, derived, pmap);
    std::vector<stl::StlFormula> literals = c.kind() == stl::StlKind::And ? c.children() : std::vector{c};
    for (const auto& lit : literals)
      if (!stl::satisfies(lit, snapshot).value) problems.push_back("violates " + stl::print(lit));
    if (!plan.gapFluent.empty()) {
      const auto& layout = theory.primitiveLayout();
      auto g = gaps(sc, out.q0);
      for (const auto& a : theory.objects())
        for (const auto& b : theory.objects()) {
          std::vector<std::string> args{a, b};
          if (w0.get(layout.index(plan.gapFluent, args))) continue;
          const double gap = g[sc.objectIndex(a)][sc.objectIndex(b)];
          if (!(gap > sc.margin))
            problems.push_back("gap(" + a + "," + b + ") = " + stl::formatNumber(gap) + " is within the margin");
        }
    }
  }
  if (!problems.empty()) {
    std::string msg = "cannot realize " + action::describe(theory, w0) + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InstantiationError(msg);
  }
  return out;
}

namespace {

/// Piecewise motion script; every segment consumes simulated time.
struct Segment {
  enum class Kind { Wait, Door, Move } kind = Kind::Wait;
  double remaining = 0;        ///< Wait: seconds
  std::size_t object = 0;      ///< Door, Move; for Wait the object whose flag is set at the end
  double target = 0;           ///< Door: degrees
  double speed = 0;            ///< Door: deg/s, Move: m/s
  std::vector<Vec3> waypoints; ///< Move: absolute positions of `object`
  std::vector<std::size_t> carried;  ///< Move: objects travelling with `object`, itself included
  bool setsRunning = false;
  std::optional<std::size_t> newSupport;
};

class Controller {
 public:
  Controller(const Scenario& sc, ConcreteState& q, const PolicyConfig& policy) : sc_(sc), q_(q), policy_(policy) {
    // Initial support relation: the closest surface within the location tolerance.
    auto g = gaps(sc, q);
    support_.assign(sc.objects.size(), std::nullopt);
    for (std::size_t i = 0; i < sc.objects.size(); ++i) {
      if (sc.objects[i].fixed) continue;
      double best = 0.01;
      for (std::size_t j = 0; j < sc.objects.size(); ++j)
        if (j != i && g[i][j] <= best) {
          best = g[i][j];
          support_[i] = j;
        }
    }
  }

  void enqueue(const logic::Action& op) {
    const auto& c = sc_.controller;
    const double scale = policy_.timingScale;
    auto objectArg = [&](std::size_t k) { return sc_.objectIndex(op.args.at(k).name()); };
    if (op.name == "open" || op.name == "close") {
      const std::size_t o = objectArg(0);
      if (sc_.objects[o].door) {
        Segment s;
        s.kind = Segment::Kind::Door;
        s.object = o;
        s.speed = c.doorSpeed / scale;
        s.target = op.name == "open" ? std::min(c.doorTarget, 100 * policy_.doorTorqueLimit) : 0.0;
        queue_.push_back(s);
      }
    } else if (op.name == "turn_on") {
      Segment s;
      s.remaining = c.turnOnTime * scale;
      s.object = objectArg(0);
      s.setsRunning = true;
      queue_.push_back(s);
    } else if (op.name == "put") {
      const std::size_t o = objectArg(0), dest = objectArg(1);
      if (!sc_.objects[o].fixed) {
        Segment s;
        s.kind = Segment::Kind::Move;
        s.object = o;
        s.speed = c.travelSpeed / scale;
        // Positions are resolved when the segment starts, so earlier moves are accounted for.
        s.newSupport = dest;
        s.target = policy_.graspSuccessMargin < 0 ? -1 : 1;
        queue_.push_back(s);
      }
    } else {
      throw SetupError("the kitchen controller has no script for operation " + op.name);
    }
    Segment settle;
    settle.remaining = c.settleTime * scale;
    queue_.push_back(settle);
  }

  bool busy() const { return !queue_.empty(); }

  void advance(double budget) {
    while (budget > 0 && !queue_.empty()) {
      Segment& s = queue_.front();
      if (s.kind == Segment::Kind::Move && s.waypoints.empty()) startMove(s);
      switch (s.kind) {
        case Segment::Kind::Wait: {
          const double used = std::min(budget, s.remaining);
          s.remaining -= used;
          budget -= used;
          if (s.remaining <= 0) {
            if (s.setsRunning) q_.objects[s.object].running = 1;
            queue_.pop_front();
          }
          break;
        }
        case Segment::Kind::Door: {
          double& angle = q_.objects[s.object].door;
          const double dist = std::abs(s.target - angle);
          const double need = dist / s.speed;
          if (need <= budget) {
            angle = s.target;
            budget -= need;
            queue_.pop_front();
          } else {
            angle += (s.target > angle ? 1 : -1) * s.speed * budget;
            budget = 0;
          }
          break;
        }
        case Segment::Kind::Move: {
          while (budget > 0 && !s.waypoints.empty()) {
            const Vec3 here = carrierPosition(s);
            const Vec3& to = s.waypoints.front();
            const double dist = std::sqrt((to[0] - here[0]) * (to[0] - here[0]) + (to[1] - here[1]) * (to[1] - here[1]) +
                                          (to[2] - here[2]) * (to[2] - here[2]));
            const double need = dist / s.speed;
            if (need <= budget) {
              shift(s, {to[0] - here[0], to[1] - here[1], to[2] - here[2]});
              budget -= need;
              s.waypoints.erase(s.waypoints.begin());
            } else {
              const double f = s.speed * budget / dist;
              shift(s, {(to[0] - here[0]) * f, (to[1] - here[1]) * f, (to[2] - here[2]) * f});
              budget = 0;
            }
          }
          if (s.waypoints.empty()) {
            if (s.target > 0) support_[s.object] = s.newSupport;
            queue_.pop_front();
          }
          break;
        }
      }
    }
  }

 private:
  /// The hand's path: up, across to above the destination, down onto its surface.
  /// With a failed grasp the hand still travels but the object stays behind.
  void startMove(Segment& s) {
    const auto& c = sc_.controller;
    const std::size_t dest = *s.newSupport;
    const Vec3 p0 = q_.objects[s.object].position;
    const Vec3& d = q_.objects[dest].position;
    const double top = supportTop(sc_.objects[dest], q_.objects[dest]);
    s.waypoints = {{p0[0], p0[1], p0[2] + c.liftHeight}, {d[0], d[1], top + c.liftHeight}, {d[0], d[1], top}};
    hand_ = p0;
    if (s.target > 0) {
      for (std::size_t i = 0; i < sc_.objects.size(); ++i)
        if (restsOn(i, s.object)) s.carried.push_back(i);
    }
  }

  bool restsOn(std::size_t i, std::size_t base) const {
    for (std::optional<std::size_t> cur = i; cur; cur = support_[*cur])
      if (*cur == base) return true;
    return false;
  }

  Vec3 carrierPosition(const Segment&) const { return hand_; }

  void shift(Segment& s, const Vec3& delta) {
    for (std::size_t a = 0; a < 3; ++a) hand_[a] += delta[a];
    for (auto i : s.carried)
      for (std::size_t a = 0; a < 3; ++a) q_.objects[i].position[a] += delta[a];
  }

  const Scenario& sc_;
  ConcreteState& q_;
  const PolicyConfig& policy_;
  std::deque<Segment> queue_;
  std::vector<std::optional<std::size_t>> support_;
  Vec3 hand_{};
};

}  // namespace

RunResult runPolicy(const Scenario& scenario, const ScenarioSample& sample, std::span<const logic::Action> ops,
                    const PolicyConfig& policy, double dt, double horizon) {
  policy.check();
  if (!(dt > 0)) throw SetupError("time step must be positive");
  if (!(horizon >= 0)) throw SetupError("horizon must not be negative");
  if (sample.q0.objects.size() != scenario.objects.size()) throw SetupError("sample does not match the scenario");
  ConcreteState q = sample.q0;
  Controller controller(scenario, q, policy);
  for (const auto& op : ops) controller.enqueue(op);

  const auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  const auto names = signalNames(scenario);
  std::vector<double> times;
  std::vector<std::vector<double>> columns(names.size());
  auto record = [&](std::size_t k) {
    times.push_back(static_cast<double>(k) * dt);
    auto v = observe(scenario, q);
    for (std::size_t i = 0; i < v.size(); ++i) columns[i].push_back(v[i]);
  };
  record(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    controller.advance(dt);
    record(k);
  }
  RunResult out{stl::Trace(std::move(times), names, std::move(columns)), controller.busy()};
  return out;
}

}  // namespace robotval::sim
