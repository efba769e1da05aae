#include "robotval/stl/synthesis.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "robotval/errors.hpp"
#include "robotval/regression/wp.hpp"

namespace robotval::stl {

bool Interval::contains(double v) const {
  if (loOpen ? !(v > lo) : !(v >= lo)) return false;
  if (hiOpen ? !(v < hi) : !(v <= hi)) return false;
  return true;
}

double Interval::at(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  double v = lo + u * (hi - lo);
  if (hiOpen && v >= hi) v = std::nextafter(hi, lo);
  if (loOpen && v <= lo) v = std::nextafter(lo, hi);
  return std::clamp(v, lo, hi);
}

const PredicateTemplate* PredicateMap::find(const std::string& fluent) const {
  auto it = templates.find(fluent);
  return it == templates.end() ? nullptr : &it->second;
}

std::string PredicateMap::signalName(const std::string& fluent, const std::vector<std::string>& args) const {
  const PredicateTemplate* t = find(fluent);
  if (t == nullptr) throw SynthesisError("no predicate mapping for fluent family " + fluent);
  if (args.size() != t->params.size())
    throw SynthesisError("fluent " + fluent + " mapped with " + std::to_string(t->params.size()) + " parameters");
  std::string name = t->signal;
  for (const auto& a : t->signalArgs) {
    auto pos = std::find(t->params.begin(), t->params.end(), a) - t->params.begin();
    name += ":" + args[static_cast<std::size_t>(pos)];
  }
  return name;
}

StlFormula PredicateMap::predicate(const std::string& fluent, const std::vector<std::string>& args) const {
  const PredicateTemplate* t = find(fluent);
  if (t == nullptr) throw SynthesisError("no predicate mapping for fluent family " + fluent);
  std::string label = fluent + "(";
  for (std::size_t i = 0; i < args.size(); ++i) label += (i ? "," : "") + args[i];
  return StlFormula::atom(signalName(fluent, args), t->comparator, t->threshold, label + ")");
}

namespace {

/// Small cursor over one pmap line.
class LineReader {
 public:
  LineReader(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_); }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool atEnd() {
    skip();
    return pos_ >= text_.size();
  }
  bool accept(std::string_view s) {
    skip();
    if (text_.substr(pos_, s.size()) != s) return false;
    pos_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }
  double number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                   text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      ++pos_;
    double v = 0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (start == pos_ || res.ec != std::errc() || res.ptr != text_.data() + pos_) fail("expected a number");
    return v;
  }
  std::vector<std::string> argList() {
    std::vector<std::string> out;
    expect("(");
    if (accept(")")) return out;
    do out.push_back(identifier());
    while (accept(","));
    expect(")");
    return out;
  }
  Interval interval() {
    Interval iv;
    if (accept("["))
      iv.loOpen = false;
    else if (accept("("))
      iv.loOpen = true;
    else
      fail("expected '[' or '('");
    iv.lo = number();
    expect(",");
    iv.hi = number();
    if (accept("]"))
      iv.hiOpen = false;
    else if (accept(")"))
      iv.hiOpen = true;
    else
      fail("expected ']' or ')'");
    if (iv.hi < iv.lo || (iv.lo == iv.hi && (iv.loOpen || iv.hiOpen))) fail("empty interval");
    return iv;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

PredicateMap parsePredicateMap(std::string_view text) {
  PredicateMap pm;
  bool haveDelta = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    LineReader r(raw, lineNo);
    if (r.atEnd()) continue;
    std::string name = r.identifier();
    if (r.accept(":") && !r.accept("=")) {
      if (name != "deltat") r.fail("unknown setting " + name);
      pm.deltaT = r.number();
      if (!(pm.deltaT > 0)) r.fail("deltat must be positive");
      haveDelta = true;
      if (!r.atEnd()) r.fail("trailing text");
      continue;
    }
    PredicateTemplate t;
    t.fluent = name;
    t.params = r.argList();
    if (std::set<std::string>(t.params.begin(), t.params.end()).size() != t.params.size()) r.fail("repeated parameter");
    r.expect(":=");
    t.signal = r.identifier();
    t.signalArgs = r.argList();
    for (const auto& a : t.signalArgs)
      if (std::find(t.params.begin(), t.params.end(), a) == t.params.end()) r.fail("signal argument " + a + " is not a parameter");
    if (r.accept(">="))
      t.comparator = Comparator::GreaterEq;
    else if (r.accept("<="))
      t.comparator = Comparator::LessEq;
    else if (r.accept(">"))
      t.comparator = Comparator::Greater;
    else if (r.accept("<"))
      t.comparator = Comparator::Less;
    else
      r.fail("expected a comparison");
    t.threshold = r.number();
    while (r.accept(";")) {
      std::string which = r.identifier();
      if (which == "true")
        t.whenTrue = r.interval();
      else if (which == "false")
        t.whenFalse = r.interval();
      else
        r.fail("expected 'true' or 'false' before an interval");
    }
    if (!r.atEnd()) r.fail("trailing text");
    if (!pm.templates.emplace(t.fluent, t).second) r.fail("fluent " + t.fluent + " mapped twice");
  }
  if (!haveDelta) throw ParseError("predicate map has no 'deltat:' line");
  return pm;
}

PredicateMap loadPredicateMap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open predicate map " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parsePredicateMap(ss.str());
}

StlFormula chi(const action::ActionTheory& theory, const action::DerivedState& w, const PredicateMap& pmap) {
  std::set<std::string> missing;
  for (const auto* layout : {&theory.primitiveLayout(), &theory.derivedLayout()})
    for (const auto& f : layout->families())
      if (f.count > 0 && pmap.find(f.name) == nullptr) missing.insert(f.name);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw SynthesisError("no predicate mapping for fluent families: " + list);
  }
  std::vector<StlFormula> literals;
  auto add = [&](const action::AtomLayout& layout, auto truth) {
    for (std::size_t i = 0; i < layout.size(); ++i) {
      auto atom = layout.atom(i);
      StlFormula p = pmap.predicate(atom.name, atom.args);
      literals.push_back(truth(i) ? p : StlFormula::negation(p));
    }
  };
  add(theory.primitiveLayout(), [&](std::size_t i) { return w.primitive.get(i); });
  add(theory.derivedLayout(), [&](std::size_t i) { return static_cast<bool>(w.derived.at(i)); });
  return StlFormula::conjunction(std::move(literals));
}

SpecSynthesisResult synthesize(const action::ActionTheory& theory, const action::WorldState& w0, const tasks::Task& tau,
                               const PredicateMap& pmap, std::optional<double> deltaT) {
  SpecSynthesisResult out;
  out.deltaT = deltaT.value_or(pmap.deltaT);
  if (!(out.deltaT > 0)) throw SynthesisError("operation duration must be positive");
  const action::DerivedState d0 = action::computeDerived(theory, w0);
  std::set<std::vector<logic::Action>> seen;
  for (const auto& branch : tasks::normalize(tau)) {
    const logic::Formula w = regression::wp(logic::Formula::top(), branch, theory).formula;
    if (!action::holds(theory, d0, w)) continue;
    BranchSpec b;
    for (const auto& step : tasks::flatten(branch))
      if (step.kind() == tasks::TaskKind::Op) b.operations.push_back(step.action());
    if (!seen.insert(b.operations).second) continue;
    action::WorldState cur = w0;
    for (const auto& op : b.operations) {
      cur = action::progress(theory, cur, op);
      b.worlds.push_back(cur);
      b.checkpoints.push_back(chi(theory, action::computeDerived(theory, cur), pmap));
    }
    StlFormula f = StlFormula::top();
    for (std::size_t i = b.checkpoints.size(); i-- > 0;)
      f = StlFormula::eventually(0, out.deltaT,
                                 i + 1 == b.checkpoints.size() ? b.checkpoints[i]
                                                               : StlFormula::conjunction({b.checkpoints[i], f}));
    b.formula = f;
    out.branches.push_back(std::move(b));
  }
  if (out.branches.empty())
    throw InternalError("no branch of " + tasks::print(tau) + " is accomplishable from " + action::describe(theory, w0));
  std::vector<StlFormula> parts;
  for (const auto& b : out.branches) parts.push_back(b.formula);
  out.formula = StlFormula::disjunction(std::move(parts));
  return out;
}

SpecSynthesisResult synthesize(const action::ActionTheory& theory, const ct::Configuration& config,
                               const PredicateMap& pmap, std::optional<double> deltaT) {
  return synthesize(theory, config.initialWorld, config.task, pmap, deltaT);
}

}  // namespace robotval::stl
