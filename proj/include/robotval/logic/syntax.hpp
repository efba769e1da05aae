#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robotval/logic/formula.hpp"

namespace robotval::logic {

/// Names the parser needs to tell constants from variables and to validate atoms.
struct Vocabulary {
  std::set<ObjectId> objects;
  std::map<std::string, std::size_t> operations;  ///< name -> arity
  std::map<std::string, std::size_t> rigid;       ///< name -> arity (empty: no check)
  std::map<std::string, std::size_t> fluents;     ///< name -> arity (empty: no check)
  std::set<std::string> sorts{std::string(kDefaultSort)};
};

enum class TokenKind {
  Identifier,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Colon,
  Semicolon,
  At,
  Question,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Equals,
  NotEquals,
  End,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view text);

/// Recursive-descent parser over a token stream; shared by formula and task text.
class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocabulary, std::span<const std::string> boundVariables = {});

  Formula formula();
  Situation situation();
  Action action();  ///< `name(args)`; arguments resolved like formula terms

  const Token& peek(std::size_t ahead = 0) const;
  bool accept(TokenKind kind);
  const Token& expect(TokenKind kind, std::string_view what);
  bool acceptKeyword(std::string_view word);
  void expectKeyword(std::string_view word);
  bool atEnd() const { return peek().kind == TokenKind::End; }
  void expectEnd();
  [[noreturn]] void fail(const std::string& message) const;

  const Vocabulary& vocabulary() const { return vocab_; }

 private:
  Formula iff();
  Formula implication();
  Formula disjunction();
  Formula conjunction();
  Formula unary();
  Formula primary();
  Term term(const std::string& name) const;
  std::vector<Term> argumentList();

  std::string text_;
  const Vocabulary& vocab_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

/// Parses a complete formula. Identifiers that name objects are constants unless
/// bound by a quantifier or listed in `boundVariables`.
Formula parseFormula(std::string_view text, const Vocabulary& vocabulary,
                     std::span<const std::string> boundVariables = {});

std::string print(const Term& t);
std::string print(const Action& a);
std::string print(const Situation& s);
/// Canonical form: `forall x:Sort . phi`, `!`, `&`, `|`, `->`, `<->`, fluents `F(args)@s`.
std::string print(const Formula& phi);

}  // namespace robotval::logic
