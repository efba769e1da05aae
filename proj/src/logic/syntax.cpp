#include "robotval/logic/syntax.hpp"

#include <algorithm>
#include <cctype>

#include "robotval/errors.hpp"

namespace robotval::logic {

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

bool isKeyword(std::string_view w) {
  static constexpr std::string_view kKeywords[] = {"true", "false", "forall", "exists", "alpha", "do",
                                                   "s0",   "nil",   "if",     "then",   "else"};
  return std::find(std::begin(kKeywords), std::end(kKeywords), w) != std::end(kKeywords);
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](TokenKind k, std::size_t len) {
    out.push_back(Token{k, std::string(text.substr(i, len)), i});
    i += len;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (identStart(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && identChar(text[j])) ++j;
      push(TokenKind::Identifier, j - i);
      continue;
    }
    auto next = [&](std::size_t k) { return i + k < text.size() ? text[i + k] : '\0'; };
    switch (c) {
      case '(': push(TokenKind::LParen, 1); break;
      case ')': push(TokenKind::RParen, 1); break;
      case '[': push(TokenKind::LBracket, 1); break;
      case ']': push(TokenKind::RBracket, 1); break;
      case ',': push(TokenKind::Comma, 1); break;
      case '.': push(TokenKind::Dot, 1); break;
      case ':': push(TokenKind::Colon, 1); break;
      case ';': push(TokenKind::Semicolon, 1); break;
      case '@': push(TokenKind::At, 1); break;
      case '?': push(TokenKind::Question, 1); break;
      case '&': push(TokenKind::And, 1); break;
      case '|': push(TokenKind::Or, 1); break;
      case '=': push(TokenKind::Equals, 1); break;
      case '!':
        if (next(1) == '=') push(TokenKind::NotEquals, 2);
        else push(TokenKind::Not, 1);
        break;
      case '-':
        if (next(1) != '>') throw ParseError("unexpected '-' at offset " + std::to_string(i));
        push(TokenKind::Implies, 2);
        break;
      case '<':
        if (next(1) != '-' || next(2) != '>') throw ParseError("unexpected '<' at offset " + std::to_string(i));
        push(TokenKind::Iff, 3);
        break;
      default: throw ParseError(std::string("unexpected character '") + c + "' at offset " + std::to_string(i));
    }
  }
  out.push_back(Token{TokenKind::End, "", text.size()});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

Parser::Parser(std::string_view text, const Vocabulary& vocabulary, std::span<const std::string> boundVariables)
    : text_(text), vocab_(vocabulary), tokens_(tokenize(text)), bound_(boundVariables.begin(), boundVariables.end()) {}

const Token& Parser::peek(std::size_t ahead) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }

bool Parser::accept(TokenKind kind) {
  if (peek().kind != kind) return false;
  ++pos_;
  return true;
}

const Token& Parser::expect(TokenKind kind, std::string_view what) {
  if (peek().kind != kind) fail("expected " + std::string(what));
  return tokens_[pos_++];
}

bool Parser::acceptKeyword(std::string_view word) {
  if (peek().kind == TokenKind::Identifier && peek().text == word) {
    ++pos_;
    return true;
  }
  return false;
}

void Parser::expectKeyword(std::string_view word) {
  if (!acceptKeyword(word)) fail("expected '" + std::string(word) + "'");
}

void Parser::expectEnd() {
  if (!atEnd()) fail("unexpected trailing input");
}

void Parser::fail(const std::string& message) const {
  const Token& t = peek();
  std::string near = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(message + " near " + near + " in \"" + text_ + "\"");
}

Formula Parser::formula() { return iff(); }

Formula Parser::iff() {
  Formula lhs = implication();
  while (accept(TokenKind::Iff)) lhs = Formula::equivalence(lhs, implication());
  return lhs;
}

Formula Parser::implication() {
  Formula lhs = disjunction();
  if (accept(TokenKind::Implies)) return Formula::implication(lhs, implication());
  return lhs;
}

Formula Parser::disjunction() {
  Formula lhs = conjunction();
  while (accept(TokenKind::Or)) lhs = Formula::disjunction(lhs, conjunction());
  return lhs;
}

Formula Parser::conjunction() {
  Formula lhs = unary();
  while (accept(TokenKind::And)) lhs = Formula::conjunction(lhs, unary());
  return lhs;
}

Formula Parser::unary() {
  if (accept(TokenKind::Not)) return Formula::negation(unary());
  const Token& t = peek();
  if (t.kind == TokenKind::Identifier && (t.text == "forall" || t.text == "exists")) {
    const bool isForall = t.text == "forall";
    ++pos_;
    const std::string var = expect(TokenKind::Identifier, "bound variable").text;
    if (isKeyword(var)) fail("keyword used as variable");
    std::string sort(kDefaultSort);
    if (accept(TokenKind::Colon)) {
      sort = expect(TokenKind::Identifier, "sort name").text;
      if (!vocab_.sorts.empty() && !vocab_.sorts.contains(sort)) fail("unknown sort " + sort);
    }
    expect(TokenKind::Dot, "'.' after quantifier");
    bound_.push_back(var);
    Formula body = formula();
    bound_.pop_back();
    return isForall ? Formula::forall(var, sort, body) : Formula::exists(var, sort, body);
  }
  return primary();
}

Term Parser::term(const std::string& name) const {
  if (std::find(bound_.begin(), bound_.end(), name) != bound_.end()) return Term::variable(name);
  if (vocab_.objects.contains(name)) return Term::constant(name);
  return Term::variable(name);
}

std::vector<Term> Parser::argumentList() {
  expect(TokenKind::LParen, "'('");
  std::vector<Term> args;
  if (accept(TokenKind::RParen)) return args;
  do {
    const std::string name = expect(TokenKind::Identifier, "argument").text;
    if (isKeyword(name)) fail("keyword used as argument");
    args.push_back(term(name));
  } while (accept(TokenKind::Comma));
  expect(TokenKind::RParen, "')'");
  return args;
}

Formula Parser::primary() {
  if (accept(TokenKind::LParen)) {
    Formula f = formula();
    expect(TokenKind::RParen, "')'");
    return f;
  }
  const Token& t = expect(TokenKind::Identifier, "formula");
  const std::string name = t.text;
  if (name == "true") return Formula::top();
  if (name == "false") return Formula::bottom();
  if (name == "alpha") {
    expect(TokenKind::Equals, "'=' after alpha");
    Action a = action();
    return Formula::actionIs(a.name, a.args);
  }
  if (isKeyword(name)) fail("unexpected keyword " + name);
  if (peek().kind == TokenKind::Equals || peek().kind == TokenKind::NotEquals) {
    const bool negated = peek().kind == TokenKind::NotEquals;
    ++pos_;
    const std::string rhs = expect(TokenKind::Identifier, "term").text;
    Formula eq = Formula::equal(term(name), term(rhs));
    return negated ? Formula::negation(eq) : eq;
  }
  if (peek().kind != TokenKind::LParen) fail("expected '(' after predicate " + name);
  std::vector<Term> args = argumentList();
  if (accept(TokenKind::At)) {
    if (!vocab_.fluents.empty()) {
      auto it = vocab_.fluents.find(name);
      if (it == vocab_.fluents.end()) fail("unknown fluent " + name);
      if (it->second != args.size()) fail("wrong arity for fluent " + name);
    }
    return Formula::fluent(name, std::move(args), situation());
  }
  if (!vocab_.rigid.empty() || !vocab_.fluents.empty()) {
    if (vocab_.fluents.contains(name)) fail("fluent " + name + " needs a situation term '@s'");
    auto it = vocab_.rigid.find(name);
    if (it == vocab_.rigid.end()) fail("unknown rigid predicate " + name);
    if (it->second != args.size()) fail("wrong arity for rigid predicate " + name);
  }
  return Formula::rigid(name, std::move(args));
}

Situation Parser::situation() {
  const std::string name = expect(TokenKind::Identifier, "situation term").text;
  if (name == "s0") return Situation::initial();
  if (name == "do") {
    expect(TokenKind::LParen, "'(' after do");
    Action a = action();
    expect(TokenKind::Comma, "',' in do-term");
    Situation pred = situation();
    expect(TokenKind::RParen, "')' closing do-term");
    return Situation::doing(std::move(a), std::move(pred));
  }
  if (isKeyword(name)) fail("unexpected keyword in situation term");
  return Situation::variable(name);
}

Action Parser::action() {
  const std::string name = expect(TokenKind::Identifier, "operation name").text;
  if (isKeyword(name)) fail("keyword used as operation name");
  if (!vocab_.operations.empty()) {
    auto it = vocab_.operations.find(name);
    if (it == vocab_.operations.end()) fail("unknown operation " + name);
    Action a{name, argumentList()};
    if (a.args.size() != it->second) fail("wrong arity for operation " + name);
    return a;
  }
  return Action{name, argumentList()};
}

Formula parseFormula(std::string_view text, const Vocabulary& vocabulary, std::span<const std::string> boundVariables) {
  Parser p(text, vocabulary, boundVariables);
  Formula f = p.formula();
  p.expectEnd();
  return f;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall: return 0;
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    default: return 5;
  }
}

std::string printTerms(const std::vector<Term>& terms) {
  std::string out = "(";
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? "," : "") + terms[i].name();
  return out + ")";
}

void printInto(const Formula& phi, std::string& out);

void printChild(const Formula& child, bool parens, std::string& out) {
  if (parens) out += '(';
  printInto(child, out);
  if (parens) out += ')';
}

void printInto(const Formula& phi, std::string& out) {
  switch (phi.kind()) {
    case FormulaKind::True: out += "true"; return;
    case FormulaKind::False: out += "false"; return;
    case FormulaKind::Rigid: out += phi.symbol() + printTerms(phi.terms()); return;
    case FormulaKind::Fluent: out += phi.symbol() + printTerms(phi.terms()) + "@" + print(phi.situation()); return;
    case FormulaKind::Equal: out += phi.terms()[0].name() + " = " + phi.terms()[1].name(); return;
    case FormulaKind::ActionEq: out += "alpha = " + phi.symbol() + printTerms(phi.terms()); return;
    case FormulaKind::Not: {
      const Formula& c = phi.child(0);
      const bool bare = c.kind() == FormulaKind::Rigid || c.kind() == FormulaKind::Fluent || c.isConstant() ||
                        c.kind() == FormulaKind::Not;
      out += '!';
      printChild(c, !bare, out);
      return;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out += phi.kind() == FormulaKind::Exists ? "exists " : "forall ";
      out += phi.symbol() + ":" + phi.sort() + " . ";
      printInto(phi.body(), out);
      return;
    default: break;
  }
  const int p = precedence(phi);
  const Formula& l = phi.child(0);
  const Formula& r = phi.child(1);
  const bool rightAssoc = phi.kind() == FormulaKind::Implies;
  printChild(l, rightAssoc ? precedence(l) <= p : precedence(l) < p, out);
  switch (phi.kind()) {
    case FormulaKind::And: out += " & "; break;
    case FormulaKind::Or: out += " | "; break;
    case FormulaKind::Implies: out += " -> "; break;
    default: out += " <-> "; break;
  }
  printChild(r, rightAssoc ? precedence(r) < p : precedence(r) <= p, out);
}

}  // namespace

std::string print(const Term& t) { return t.name(); }

std::string print(const Action& a) { return a.name + printTerms(a.args); }

std::string print(const Situation& s) {
  switch (s.kind()) {
    case Situation::Kind::Initial: return "s0";
    case Situation::Kind::Variable: return s.variableName();
    case Situation::Kind::Do: return "do(" + print(s.action()) + "," + print(s.predecessor()) + ")";
  }
  return {};
}

std::string print(const Formula& phi) {
  std::string out;
  printInto(phi, out);
  return out;
}

}  // namespace robotval::logic
