#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robotval/action/model_file.hpp"
#include "robotval/logic/syntax.hpp"
#include "robotval/tasks/task.hpp"

namespace robotval::tasks {

struct GrammarSymbol {
  bool nonterminal = false;
  std::string text;

  friend bool operator==(const GrammarSymbol&, const GrammarSymbol&) = default;
};

struct GrammarRule {
  std::string id;
  std::string lhs;
  std::vector<GrammarSymbol> rhs;
};

/// Task grammar. The start symbol is the left-hand side of the first rule as
/// written; rules are otherwise kept sorted by id, which fixes derivation order.
class Grammar {
 public:
  Grammar(std::vector<GrammarRule> rules, std::string start);

  /// Builds a grammar from model-file rule lines; nonterminals are the
  /// identifiers that occur as some rule's left-hand side.
  static Grammar fromText(std::span<const action::GrammarRuleText> rules);

  const std::string& start() const noexcept { return start_; }
  const std::vector<GrammarRule>& rules() const noexcept { return rules_; }  ///< sorted by id
  const GrammarRule& rule(const std::string& id) const;
  std::size_t ruleIndex(const std::string& id) const;
  /// Indices into rules() for a nonterminal, ascending by id.
  const std::vector<std::size_t>& rulesFor(const std::string& nonterminal) const;
  /// Fewest derivation steps that turn the nonterminal into terminals.
  std::size_t minSteps(const std::string& nonterminal) const;

 private:
  std::vector<GrammarRule> rules_;
  std::string start_;
  std::map<std::string, std::vector<std::size_t>> byLhs_;
  std::map<std::string, std::size_t> byId_;
  std::map<std::string, std::size_t> minSteps_;
};

/// Rule ids applied leftmost-first. Steps beyond size() are epsilon.
struct Derivation {
  std::vector<std::string> steps;

  friend bool operator==(const Derivation&, const Derivation&) = default;
  friend auto operator<=>(const Derivation&, const Derivation&) = default;
};

struct DerivedTask {
  Derivation derivation;
  Task task;
};

/// Applies the rules to the start symbol; returns the terminal symbols, or
/// nothing if a rule does not match the leftmost nonterminal or nonterminals remain.
std::optional<std::vector<GrammarSymbol>> replay(const Grammar& grammar, std::span<const std::string> steps);

/// Task text of a terminal sentence.
std::string sentenceText(std::span<const GrammarSymbol> sentence);

/// Visits every complete derivation with at most K steps, depth-first with
/// rules tried in id order. Stops early when the visitor returns false.
void forEachDerivation(const Grammar& grammar, std::size_t K,
                       const std::function<bool(const Derivation&, const std::vector<GrammarSymbol>&)>& visit);

std::vector<DerivedTask> enumerateDerivations(const Grammar& grammar, std::size_t K, const logic::Vocabulary& vocabulary);

}  // namespace robotval::tasks
