#include "robotval/stl/monitor.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "robotval/errors.hpp"

namespace robotval::stl {

namespace {

constexpr double kSnap = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

double snap(const Trace& trace, double t) {
  const auto& ts = trace.times();
  auto it = std::lower_bound(ts.begin(), ts.end(), t - kSnap);
  if (it != ts.end() && std::abs(*it - t) <= kSnap) return *it;
  return t;
}

}  // namespace

std::vector<double> windowPoints(const Trace& trace, double from, double to, bool& truncated) {
  if (trace.empty()) throw TruncationError("empty trace");
  from = snap(trace, from);
  to = snap(trace, to);
  if (from < trace.start()) throw SpecError("evaluation time before the start of the trace");
  if (from > trace.end()) throw TruncationError("window starting at " + formatNumber(from) + " s lies past the trace end");
  if (to > trace.end()) {
    truncated = true;
    to = trace.end();
  }
  std::vector<double> out{from};
  const auto& ts = trace.times();
  for (auto it = std::upper_bound(ts.begin(), ts.end(), from); it != ts.end() && *it < to; ++it) out.push_back(*it);
  if (to > from) out.push_back(to);
  return out;
}

namespace {

class RobustnessEval {
 public:
  explicit RobustnessEval(const Trace& trace) : trace_(trace) {}

  Robustness at(const StlFormula& f, double t) {
    auto key = std::make_pair(f.id(), t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Robustness r = compute(f, t);
    memo_.emplace(key, r);
    return r;
  }

 private:
  Robustness compute(const StlFormula& f, double t) {
    switch (f.kind()) {
      case StlKind::True: return {kInf, false};
      case StlKind::False: return {-kInf, false};
      case StlKind::Atom: {
        const double x = trace_.value(f.signal(), t);
        const bool above = f.comparator() == Comparator::Greater || f.comparator() == Comparator::GreaterEq;
        return {above ? x - f.threshold() : f.threshold() - x, false};
      }
      case StlKind::Not: {
        Robustness r = at(f.children()[0], t);
        return {-r.value, r.truncated};
      }
      case StlKind::And:
      case StlKind::Or: {
        const bool isAnd = f.kind() == StlKind::And;
        Robustness out{isAnd ? kInf : -kInf, false};
        for (const auto& c : f.children()) {
          Robustness r = at(c, t);
          out.value = isAnd ? std::min(out.value, r.value) : std::max(out.value, r.value);
          out.truncated = out.truncated || r.truncated;
        }
        return out;
      }
      case StlKind::Eventually:
      case StlKind::Always: {
        const bool isMax = f.kind() == StlKind::Eventually;
        Robustness out{isMax ? -kInf : kInf, false};
        for (double p : windowPoints(trace_, t + f.lower(), t + f.upper(), out.truncated)) {
          Robustness r = at(f.children()[0], p);
          out.value = isMax ? std::max(out.value, r.value) : std::min(out.value, r.value);
          out.truncated = out.truncated || r.truncated;
        }
        return out;
      }
      case StlKind::Until: {
        Robustness out{-kInf, false};
        for (double p : windowPoints(trace_, t + f.lower(), t + f.upper(), out.truncated)) {
          Robustness r = at(f.children()[1], p);
          double v = r.value;
          out.truncated = out.truncated || r.truncated;
          for (double q : windowPoints(trace_, t, p, out.truncated)) {
            Robustness l = at(f.children()[0], q);
            v = std::min(v, l.value);
            out.truncated = out.truncated || l.truncated;
          }
          out.value = std::max(out.value, v);
        }
        return out;
      }
    }
    return {0, false};
  }

  const Trace& trace_;
  std::map<std::pair<const void*, double>, Robustness> memo_;
};

class BooleanEval {
 public:
  explicit BooleanEval(const Trace& trace) : trace_(trace) {}

  Satisfaction at(const StlFormula& f, double t) {
    switch (f.kind()) {
      case StlKind::True: return {true, false};
      case StlKind::False: return {false, false};
      case StlKind::Atom: {
        const double x = trace_.value(f.signal(), t);
        switch (f.comparator()) {
          case Comparator::Greater:
          case Comparator::GreaterEq: return {x >= f.threshold(), false};
          case Comparator::Less:
          case Comparator::LessEq: return {x <= f.threshold(), false};
        }
        return {false, false};
      }
      case StlKind::Not: {
        Satisfaction s = at(f.children()[0], t);
        return {!s.value, s.truncated};
      }
      case StlKind::And:
      case StlKind::Or: {
        const bool isAnd = f.kind() == StlKind::And;
        Satisfaction out{isAnd, false};
        for (const auto& c : f.children()) {
          Satisfaction s = at(c, t);
          out.value = isAnd ? (out.value && s.value) : (out.value || s.value);
          out.truncated = out.truncated || s.truncated;
        }
        return out;
      }
      case StlKind::Eventually:
      case StlKind::Always: {
        const bool exists = f.kind() == StlKind::Eventually;
        Satisfaction out{!exists, false};
        for (double p : windowPoints(trace_, t + f.lower(), t + f.upper(), out.truncated)) {
          Satisfaction s = at(f.children()[0], p);
          out.truncated = out.truncated || s.truncated;
          if (s.value == exists) out.value = exists;
        }
        return out;
      }
      case StlKind::Until: {
        Satisfaction out{false, false};
        for (double p : windowPoints(trace_, t + f.lower(), t + f.upper(), out.truncated)) {
          Satisfaction r = at(f.children()[1], p);
          out.truncated = out.truncated || r.truncated;
          bool held = r.value;
          for (double q : windowPoints(trace_, t, p, out.truncated)) {
            Satisfaction l = at(f.children()[0], q);
            out.truncated = out.truncated || l.truncated;
            held = held && l.value;
          }
          out.value = out.value || held;
        }
        return out;
      }
    }
    return {false, false};
  }

 private:
  const Trace& trace_;
};

void checkSignals(const StlFormula& phi, const Trace& trace) {
  for (const auto& s : signals(phi))
    if (!trace.has(s)) throw SpecError("formula uses signal " + s + " which the trace does not contain");
}

}  // namespace

Robustness robustness(const StlFormula& phi, const Trace& trace, double t) {
  checkSignals(phi, trace);
  bool truncated = false;
  windowPoints(trace, t, t, truncated);
  return RobustnessEval(trace).at(phi, snap(trace, t));
}

Satisfaction satisfies(const StlFormula& phi, const Trace& trace, double t) {
  checkSignals(phi, trace);
  bool truncated = false;
  windowPoints(trace, t, t, truncated);
  return BooleanEval(trace).at(phi, snap(trace, t));
}

}  // namespace robotval::stl
