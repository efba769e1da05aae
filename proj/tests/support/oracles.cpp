#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "robotval/errors.hpp"
#include "robotval/logic/world.hpp"

namespace oracle {

using namespace robotval;

std::filesystem::path sourceDir() { return ROBOTVAL_SOURCE_DIR; }
std::filesystem::path modelPath(const std::string& name) { return sourceDir() / "models" / name; }

std::vector<WorldState> runs(const ActionTheory& theory, const WorldState& w, const tasks::Task& tau) {
  switch (tau.kind()) {
    case tasks::TaskKind::Nil: return {w};
    case tasks::TaskKind::Op:
      if (!action::possible(theory, w, tau.action())) return {};
      return {action::progress(theory, w, tau.action())};
    case tasks::TaskKind::Test:
      if (!action::holds(theory, action::computeDerived(theory, w), tau.formula())) return {};
      return {w};
    case tasks::TaskKind::Seq: {
      std::vector<WorldState> out;
      for (const auto& mid : runs(theory, w, tau.first())) {
        auto rest = runs(theory, mid, tau.second());
        out.insert(out.end(), rest.begin(), rest.end());
      }
      return out;
    }
    case tasks::TaskKind::Choice: {
      auto out = runs(theory, w, tau.first());
      auto more = runs(theory, w, tau.second());
      out.insert(out.end(), more.begin(), more.end());
      return out;
    }
  }
  return {};
}

bool completes(const ActionTheory& theory, const WorldState& w, const tasks::Task& tau) {
  return !runs(theory, w, tau).empty();
}

namespace {

std::vector<std::vector<std::string>> tuples(const std::vector<std::string>& objects, std::size_t arity) {
  std::vector<std::vector<std::string>> out{{}};
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : out)
      for (const auto& o : objects) {
        auto t = prefix;
        t.push_back(o);
        next.push_back(t);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<WorldState> initialWorldsBruteForce(const ActionTheory& theory) {
  const auto& layout = theory.primitiveLayout();
  const std::size_t n = layout.size();
  if (n > 24) throw std::runtime_error("too many primitive atoms for brute force");
  std::map<std::string, std::vector<std::string>> sorts(theory.sorts().begin(), theory.sorts().end());
  sorts[std::string(logic::kDefaultSort)] = theory.objects();

  std::vector<WorldState> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    logic::World world(sorts);
    for (const auto& p : theory.predicates()) {
      if (p.kind != action::PredicateKind::Rigid) continue;
      for (const auto& args : tuples(theory.objects(), p.arity)) {
        logic::GroundAtom atom{p.name, args};
        world.setRigid(atom, theory.rigidTruths().count(atom) > 0);
      }
    }
    for (std::size_t i = 0; i < n; ++i) world.setFluent(layout.atom(i), logic::Situation::initial(), (bits >> i) & 1);
    bool ok = true;
    for (const auto& axiom : theory.initialAxioms()) ok = ok && logic::evaluate(world, axiom);
    if (!ok) continue;
    WorldState w(n);
    for (std::size_t i = 0; i < n; ++i) w.set(i, (bits >> i) & 1);
    out.push_back(w);
  }
  return out;
}

std::set<std::pair<std::string, std::string>> closure(const ActionTheory& theory, const WorldState& w,
                                                      const std::string& fluent) {
  const auto& objs = theory.objects();
  const std::size_t n = objs.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::string> args{objs[i], objs[j]};
      r[i][j] = w.get(theory.primitiveLayout().index(fluent, args));
    }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j]) out.emplace(objs[i], objs[j]);
  return out;
}

std::set<ct::Assignment> validAssignments(const ct::CtModel& model, const ActionTheory& theory,
                                          const tasks::Grammar& grammar, std::size_t K) {
  const auto worlds = action::enumerateInitialWorlds(theory);
  std::set<ct::Assignment> out;
  for (const auto& d : tasks::enumerateDerivations(grammar, K, theory.vocabulary()))
    for (const auto& w : worlds)
      if (completes(theory, w, d.task)) {
        auto a = ct::encodeConfiguration(model, theory, w, d.derivation);
        if (!a) throw std::runtime_error("configuration has no encoding");
        out.insert(*a);
      }
  return out;
}

CoverageCheck checkCoverage(const ct::CtModel& model, const std::vector<ct::Assignment>& rows,
                            const std::set<ct::Assignment>& valid, std::size_t t) {
  CoverageCheck check;
  for (const auto& r : rows)
    if (!valid.count(r)) {
      check.sound = false;
      if (check.firstProblem.empty()) check.firstProblem = "invalid row " + ct::printAssignment(model, r);
    }
  const std::size_t n = model.parameters.size();
  std::vector<std::size_t> combo(t);
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t depth, std::size_t from) {
    if (depth == t) {
      std::set<std::vector<std::size_t>> needed, covered;
      auto project = [&](const ct::Assignment& a) {
        std::vector<std::size_t> v;
        for (auto c : combo) v.push_back(a[c]);
        return v;
      };
      for (const auto& a : valid) needed.insert(project(a));
      for (const auto& r : rows) covered.insert(project(r));
      check.coverable += needed.size();
      for (const auto& v : needed)
        if (!covered.count(v)) {
          ++check.missed;
          if (check.firstProblem.empty()) check.firstProblem = "uncovered tuple on " + model.parameters[combo[0]].name;
        }
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      combo[depth] = i;
      walk(depth + 1, i + 1);
    }
  };
  walk(0, 0);
  return check;
}

namespace {

/// Sample instants strictly inside (lo, hi), plus both ends, hi cut at the trace end.
std::vector<double> points(const stl::Trace& trace, double lo, double hi) {
  hi = std::min(hi, trace.end());
  std::vector<double> out{lo};
  for (double s : trace.times())
    if (s > lo && s < hi) out.push_back(s);
  if (hi > lo) out.push_back(hi);
  return out;
}

double atomValue(const stl::StlFormula& f, const stl::Trace& trace, double t) {
  std::size_t k = 0;
  while (k + 1 < trace.size() && trace.times()[k + 1] <= t) ++k;
  const double x = trace.column(f.signal())[k];
  switch (f.comparator()) {
    case stl::Comparator::Greater:
    case stl::Comparator::GreaterEq: return x - f.threshold();
    case stl::Comparator::Less:
    case stl::Comparator::LessEq: return f.threshold() - x;
  }
  return 0;
}

}  // namespace

double robustness(const stl::StlFormula& phi, const stl::Trace& trace, double t) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (phi.kind()) {
    case stl::StlKind::True: return inf;
    case stl::StlKind::False: return -inf;
    case stl::StlKind::Atom: return atomValue(phi, trace, t);
    case stl::StlKind::Not: return -robustness(phi.children()[0], trace, t);
    case stl::StlKind::And: {
      double v = inf;
      for (const auto& c : phi.children()) v = std::min(v, robustness(c, trace, t));
      return v;
    }
    case stl::StlKind::Or: {
      double v = -inf;
      for (const auto& c : phi.children()) v = std::max(v, robustness(c, trace, t));
      return v;
    }
    case stl::StlKind::Eventually: {
      double v = -inf;
      for (double p : points(trace, t + phi.lower(), t + phi.upper()))
        v = std::max(v, robustness(phi.children()[0], trace, p));
      return v;
    }
    case stl::StlKind::Always: {
      double v = inf;
      for (double p : points(trace, t + phi.lower(), t + phi.upper()))
        v = std::min(v, robustness(phi.children()[0], trace, p));
      return v;
    }
    case stl::StlKind::Until: {
      double v = -inf;
      for (double p : points(trace, t + phi.lower(), t + phi.upper())) {
        double here = robustness(phi.children()[1], trace, p);
        for (double q : points(trace, t, p)) here = std::min(here, robustness(phi.children()[0], trace, q));
        v = std::max(v, here);
      }
      return v;
    }
  }
  return 0;
}

bool satisfied(const stl::StlFormula& phi, const stl::Trace& trace, double t) {
  switch (phi.kind()) {
    case stl::StlKind::True: return true;
    case stl::StlKind::False: return false;
    case stl::StlKind::Atom: return atomValue(phi, trace, t) >= 0;
    case stl::StlKind::Not: return !satisfied(phi.children()[0], trace, t);
    case stl::StlKind::And:
      return std::all_of(phi.children().begin(), phi.children().end(),
                         [&](const auto& c) { return satisfied(c, trace, t); });
    case stl::StlKind::Or:
      return std::any_of(phi.children().begin(), phi.children().end(),
                         [&](const auto& c) { return satisfied(c, trace, t); });
    case stl::StlKind::Eventually:
      for (double p : points(trace, t + phi.lower(), t + phi.upper()))
        if (satisfied(phi.children()[0], trace, p)) return true;
      return false;
    case stl::StlKind::Always:
      for (double p : points(trace, t + phi.lower(), t + phi.upper()))
        if (!satisfied(phi.children()[0], trace, p)) return false;
      return true;
    case stl::StlKind::Until:
      for (double p : points(trace, t + phi.lower(), t + phi.upper())) {
        bool ok = satisfied(phi.children()[1], trace, p);
        for (double q : points(trace, t, p)) ok = ok && satisfied(phi.children()[0], trace, q);
        if (ok) return true;
      }
      return false;
  }
  return false;
}

stl::StlFormula randomStl(std::mt19937_64& rng, const std::vector<std::string>& signals, int depth, int maxBound) {
  std::uniform_int_distribution<int> kindDist(0, depth <= 0 ? 0 : 6);
  std::uniform_real_distribution<double> thr(-8, 8);
  std::uniform_int_distribution<int> bound(0, maxBound);
  std::uniform_int_distribution<std::size_t> sig(0, signals.size() - 1);
  switch (kindDist(rng)) {
    case 0: {
      static const stl::Comparator cmps[] = {stl::Comparator::Greater, stl::Comparator::GreaterEq, stl::Comparator::Less,
                                             stl::Comparator::LessEq};
      return stl::StlFormula::atom(signals[sig(rng)], cmps[rng() % 4], thr(rng));
    }
    case 1: return stl::StlFormula::negation(randomStl(rng, signals, depth - 1, maxBound));
    case 2:
      return stl::StlFormula::conjunction(
          {randomStl(rng, signals, depth - 1, maxBound), randomStl(rng, signals, depth - 1, maxBound)});
    case 3:
      return stl::StlFormula::disjunction(
          {randomStl(rng, signals, depth - 1, maxBound), randomStl(rng, signals, depth - 1, maxBound)});
    default: break;
  }
  int a = bound(rng), b = bound(rng);
  if (a > b) std::swap(a, b);
  switch (rng() % 3) {
    case 0: return stl::StlFormula::eventually(a, b, randomStl(rng, signals, depth - 1, maxBound));
    case 1: return stl::StlFormula::always(a, b, randomStl(rng, signals, depth - 1, maxBound));
    default: {
      auto lhs = randomStl(rng, signals, depth - 1, maxBound);
      return stl::StlFormula::until(a, b, lhs, randomStl(rng, signals, depth - 1, maxBound));
    }
  }
}

stl::Trace randomTrace(std::mt19937_64& rng, const std::vector<std::string>& signals, double dt, double horizon) {
  std::uniform_real_distribution<double> val(-10, 10);
  std::vector<double> times;
  for (std::size_t k = 0; static_cast<double>(k) * dt <= horizon + 1e-9; ++k) times.push_back(static_cast<double>(k) * dt);
  std::vector<std::vector<double>> cols(signals.size());
  for (auto& c : cols)
    for (std::size_t k = 0; k < times.size(); ++k) c.push_back(val(rng));
  return stl::Trace(times, signals, cols);
}

logic::Formula randomFluentFormula(std::mt19937_64& rng, const ActionTheory& theory, const logic::Situation& s,
                                   int depth) {
  const auto& layout = theory.primitiveLayout();
  if (depth <= 0 || rng() % 4 == 0) {
    auto atom = layout.atom(rng() % layout.size());
    std::vector<logic::Term> terms;
    for (const auto& a : atom.args) terms.push_back(logic::Term::constant(a));
    return logic::Formula::fluent(atom.name, terms, s);
  }
  auto a = randomFluentFormula(rng, theory, s, depth - 1);
  switch (rng() % 4) {
    case 0: return logic::Formula::negation(a);
    case 1: return logic::Formula::conjunction(a, randomFluentFormula(rng, theory, s, depth - 1));
    case 2: return logic::Formula::disjunction(a, randomFluentFormula(rng, theory, s, depth - 1));
    default: return logic::Formula::implication(a, randomFluentFormula(rng, theory, s, depth - 1));
  }
}

const WorldState& pick(std::mt19937_64& rng, const std::vector<WorldState>& worlds) {
  return worlds[rng() % worlds.size()];
}

}  // namespace oracle
