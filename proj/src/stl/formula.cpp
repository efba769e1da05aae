#include "robotval/stl/formula.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <system_error>

#include "robotval/errors.hpp"

namespace robotval::stl {

struct StlFormula::Node {
  StlKind kind = StlKind::True;
  std::string signal;
  Comparator cmp = Comparator::Greater;
  double threshold = 0;
  std::string label;
  double a = 0;
  double b = 0;
  std::vector<StlFormula> children;
};

namespace {

void checkInterval(double a, double b) {
  if (!(a >= 0) || !(b >= a)) throw SpecError("temporal interval [" + formatNumber(a) + "," + formatNumber(b) + "] needs 0 <= a <= b");
}

}  // namespace

StlFormula::StlFormula() : StlFormula(top()) {}

StlFormula StlFormula::top() {
  static const StlFormula t(std::make_shared<const Node>(Node{StlKind::True, {}, Comparator::Greater, 0, {}, 0, 0, {}}));
  return t;
}

StlFormula StlFormula::bottom() {
  static const StlFormula f(std::make_shared<const Node>(Node{StlKind::False, {}, Comparator::Greater, 0, {}, 0, 0, {}}));
  return f;
}

StlFormula StlFormula::atom(std::string signal, Comparator cmp, double threshold, std::string label) {
  if (signal.empty()) throw SpecError("atom without a signal");
  auto n = std::make_shared<Node>();
  n->kind = StlKind::Atom;
  n->signal = std::move(signal);
  n->cmp = cmp;
  n->threshold = threshold;
  n->label = std::move(label);
  return StlFormula(std::move(n));
}

StlFormula StlFormula::negation(StlFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = StlKind::Not;
  n->children.push_back(std::move(f));
  return StlFormula(std::move(n));
}

StlFormula StlFormula::conjunction(std::vector<StlFormula> parts) {
  if (parts.empty()) return top();
  if (parts.size() == 1) return parts[0];
  auto n = std::make_shared<Node>();
  n->kind = StlKind::And;
  n->children = std::move(parts);
  return StlFormula(std::move(n));
}

StlFormula StlFormula::disjunction(std::vector<StlFormula> parts) {
  if (parts.empty()) return bottom();
  if (parts.size() == 1) return parts[0];
  auto n = std::make_shared<Node>();
  n->kind = StlKind::Or;
  n->children = std::move(parts);
  return StlFormula(std::move(n));
}

StlFormula StlFormula::eventually(double a, double b, StlFormula f) {
  checkInterval(a, b);
  auto n = std::make_shared<Node>();
  n->kind = StlKind::Eventually;
  n->a = a;
  n->b = b;
  n->children.push_back(std::move(f));
  return StlFormula(std::move(n));
}

StlFormula StlFormula::always(double a, double b, StlFormula f) {
  checkInterval(a, b);
  auto n = std::make_shared<Node>();
  n->kind = StlKind::Always;
  n->a = a;
  n->b = b;
  n->children.push_back(std::move(f));
  return StlFormula(std::move(n));
}

StlFormula StlFormula::until(double a, double b, StlFormula lhs, StlFormula rhs) {
  checkInterval(a, b);
  auto n = std::make_shared<Node>();
  n->kind = StlKind::Until;
  n->a = a;
  n->b = b;
  n->children = {std::move(lhs), std::move(rhs)};
  return StlFormula(std::move(n));
}

StlKind StlFormula::kind() const noexcept { return node_->kind; }

const std::string& StlFormula::signal() const {
  if (kind() != StlKind::Atom) throw InternalError("not an atom");
  return node_->signal;
}

Comparator StlFormula::comparator() const {
  if (kind() != StlKind::Atom) throw InternalError("not an atom");
  return node_->cmp;
}

double StlFormula::threshold() const {
  if (kind() != StlKind::Atom) throw InternalError("not an atom");
  return node_->threshold;
}

const std::string& StlFormula::label() const {
  if (kind() != StlKind::Atom) throw InternalError("not an atom");
  return node_->label;
}

double StlFormula::lower() const { return node_->a; }
double StlFormula::upper() const { return node_->b; }
const std::vector<StlFormula>& StlFormula::children() const { return node_->children; }

std::size_t StlFormula::size() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.size();
  return n;
}

bool operator==(const StlFormula& x, const StlFormula& y) {
  if (x.node_ == y.node_) return true;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  if (a.kind != b.kind) return false;
  if (a.kind == StlKind::Atom) return a.signal == b.signal && a.cmp == b.cmp && a.threshold == b.threshold;
  return a.a == b.a && a.b == b.b && a.children == b.children;
}

std::string formatNumber(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

const char* comparatorText(Comparator c) {
  switch (c) {
    case Comparator::Greater: return ">";
    case Comparator::GreaterEq: return ">=";
    case Comparator::Less: return "<";
    case Comparator::LessEq: return "<=";
  }
  return "?";
}

void printTo(const StlFormula& f, std::string& out) {
  switch (f.kind()) {
    case StlKind::True: out += "true"; return;
    case StlKind::False: out += "false"; return;
    case StlKind::Atom:
      out += "(" + std::string(comparatorText(f.comparator())) + " " + f.signal() + " " + formatNumber(f.threshold()) + ")";
      return;
    default: break;
  }
  out += "(";
  switch (f.kind()) {
    case StlKind::Not: out += "not"; break;
    case StlKind::And: out += "and"; break;
    case StlKind::Or: out += "or"; break;
    case StlKind::Eventually: out += "F"; break;
    case StlKind::Always: out += "G"; break;
    case StlKind::Until: out += "U"; break;
    default: break;
  }
  if (f.kind() == StlKind::Eventually || f.kind() == StlKind::Always || f.kind() == StlKind::Until)
    out += " [" + formatNumber(f.lower()) + "," + formatNumber(f.upper()) + "]";
  for (const auto& c : f.children()) {
    out += ' ';
    printTo(c, out);
  }
  out += ")";
}

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : text_(text) {}

  StlFormula formula() {
    skip();
    if (take("true")) return StlFormula::top();
    if (take("false")) return StlFormula::bottom();
    expect('(');
    std::string head = word();
    StlFormula out;
    if (head == ">" || head == ">=" || head == "<" || head == "<=") {
      Comparator c = head == ">" ? Comparator::Greater
                     : head == ">=" ? Comparator::GreaterEq
                     : head == "<" ? Comparator::Less
                                   : Comparator::LessEq;
      std::string sig = word();
      out = StlFormula::atom(sig, c, number(word()));
    } else if (head == "not") {
      out = StlFormula::negation(formula());
    } else if (head == "and" || head == "or") {
      std::vector<StlFormula> parts;
      while (skip(), pos_ < text_.size() && text_[pos_] != ')') parts.push_back(formula());
      if (parts.size() < 2) fail(head + " needs at least two operands");
      out = head == "and" ? StlFormula::conjunction(std::move(parts)) : StlFormula::disjunction(std::move(parts));
    } else if (head == "F" || head == "G" || head == "U") {
      skip();
      expect('[');
      double a = number(until(','));
      expect(',');
      double b = number(until(']'));
      expect(']');
      if (head == "U") {
        StlFormula lhs = formula();
        out = StlFormula::until(a, b, lhs, formula());
      } else {
        StlFormula body = formula();
        out = head == "F" ? StlFormula::eventually(a, b, body) : StlFormula::always(a, b, body);
      }
    } else {
      fail("unknown operator '" + head + "'");
    }
    skip();
    expect(')');
    return out;
  }

  void end() {
    skip();
    if (pos_ != text_.size()) fail("trailing text");
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("STL at offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool take(std::string_view w) {
    if (text_.substr(pos_, w.size()) != w) return false;
    const std::size_t after = pos_ + w.size();
    if (after < text_.size() && !std::isspace(static_cast<unsigned char>(text_[after])) && text_[after] != ')') return false;
    pos_ = after;
    return true;
  }
  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected a word");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::string until(char stop) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != stop) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  double number(const std::string& s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("bad number '" + s + "'");
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string print(const StlFormula& f) {
  std::string out;
  printTo(f, out);
  return out;
}

StlFormula parseStl(std::string_view text) {
  SexprParser p(text);
  StlFormula f = p.formula();
  p.end();
  return f;
}

std::vector<std::string> signals(const StlFormula& f) {
  std::set<std::string> out;
  std::vector<const StlFormula*> todo{&f};
  while (!todo.empty()) {
    const StlFormula* g = todo.back();
    todo.pop_back();
    if (g->kind() == StlKind::Atom) out.insert(g->signal());
    for (const auto& c : g->children()) todo.push_back(&c);
  }
  return {out.begin(), out.end()};
}

}  // namespace robotval::stl
