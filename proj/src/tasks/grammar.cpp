#include "robotval/tasks/grammar.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "robotval/errors.hpp"

namespace robotval::tasks {

namespace {

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

}  // namespace

Grammar::Grammar(std::vector<GrammarRule> rules, std::string start) : rules_(std::move(rules)), start_(std::move(start)) {
  std::sort(rules_.begin(), rules_.end(), [](const GrammarRule& a, const GrammarRule& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (!byId_.emplace(rules_[i].id, i).second) throw ModelError("grammar rule id " + rules_[i].id + " used twice");
    byLhs_[rules_[i].lhs].push_back(i);
  }
  if (!rules_.empty() && !byLhs_.count(start_)) throw ModelError("start symbol " + start_ + " has no rules");
  for (const auto& r : rules_)
    for (const auto& s : r.rhs)
      if (s.nonterminal && !byLhs_.count(s.text)) throw ModelError("nonterminal " + s.text + " has no rules");

  // Every left-hand side must be reachable from the start symbol.
  std::set<std::string> reached{start_};
  std::vector<std::string> todo{start_};
  while (!todo.empty()) {
    std::string nt = todo.back();
    todo.pop_back();
    auto it = byLhs_.find(nt);
    if (it == byLhs_.end()) continue;
    for (auto i : it->second)
      for (const auto& s : rules_[i].rhs)
        if (s.nonterminal && reached.insert(s.text).second) todo.push_back(s.text);
  }
  for (const auto& [lhs, ids] : byLhs_)
    if (!reached.count(lhs)) throw ModelError("nonterminal " + lhs + " is unreachable from " + start_);

  for (const auto& [lhs, ids] : byLhs_) minSteps_[lhs] = kUnreachable;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : rules_) {
      std::size_t cost = 1;
      for (const auto& s : r.rhs) {
        if (!s.nonterminal) continue;
        std::size_t m = minSteps_[s.text];
        cost = m == kUnreachable ? kUnreachable : cost + m;
        if (cost == kUnreachable) break;
      }
      if (cost < minSteps_[r.lhs]) {
        minSteps_[r.lhs] = cost;
        changed = true;
      }
    }
  }
}

Grammar Grammar::fromText(std::span<const action::GrammarRuleText> rules) {
  std::set<std::string> nonterminals;
  for (const auto& r : rules) nonterminals.insert(r.lhs);
  std::vector<GrammarRule> out;
  for (const auto& r : rules) {
    GrammarRule g{r.id, r.lhs, {}};
    std::vector<logic::Token> tokens;
    try {
      tokens = logic::tokenize(r.rhs);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), r.line);
    }
    for (const auto& t : tokens) {
      if (t.kind == logic::TokenKind::End) break;
      const bool nt = t.kind == logic::TokenKind::Identifier && nonterminals.count(t.text) > 0;
      g.rhs.push_back({nt, t.text});
    }
    out.push_back(std::move(g));
  }
  return Grammar(std::move(out), rules.empty() ? std::string("T") : rules.front().lhs);
}

const GrammarRule& Grammar::rule(const std::string& id) const { return rules_[ruleIndex(id)]; }

std::size_t Grammar::ruleIndex(const std::string& id) const {
  auto it = byId_.find(id);
  if (it == byId_.end()) throw ModelError("unknown grammar rule " + id);
  return it->second;
}

const std::vector<std::size_t>& Grammar::rulesFor(const std::string& nonterminal) const {
  static const std::vector<std::size_t> none;
  auto it = byLhs_.find(nonterminal);
  return it == byLhs_.end() ? none : it->second;
}

std::size_t Grammar::minSteps(const std::string& nonterminal) const {
  auto it = minSteps_.find(nonterminal);
  return it == minSteps_.end() ? kUnreachable : it->second;
}

namespace {

std::vector<GrammarSymbol>::iterator leftmost(std::vector<GrammarSymbol>& form) {
  return std::find_if(form.begin(), form.end(), [](const GrammarSymbol& s) { return s.nonterminal; });
}

}  // namespace

std::optional<std::vector<GrammarSymbol>> replay(const Grammar& grammar, std::span<const std::string> steps) {
  std::vector<GrammarSymbol> form{{true, grammar.start()}};
  for (const auto& id : steps) {
    auto it = leftmost(form);
    if (it == form.end()) return std::nullopt;
    const auto& r = grammar.rule(id);
    if (r.lhs != it->text) return std::nullopt;
    it = form.erase(it);
    form.insert(it, r.rhs.begin(), r.rhs.end());
  }
  if (leftmost(form) != form.end()) return std::nullopt;
  return form;
}

std::string sentenceText(std::span<const GrammarSymbol> sentence) {
  std::string out;
  for (const auto& s : sentence) {
    if (!out.empty()) out += ' ';
    out += s.text;
  }
  return out;
}

void forEachDerivation(const Grammar& grammar, std::size_t K,
                       const std::function<bool(const Derivation&, const std::vector<GrammarSymbol>&)>& visit) {
  if (grammar.rules().empty()) return;
  Derivation d;
  bool stop = false;
  std::function<void(std::vector<GrammarSymbol>&)> expand = [&](std::vector<GrammarSymbol>& form) {
    if (stop) return;
    std::size_t pending = 0;
    for (const auto& s : form)
      if (s.nonterminal) {
        std::size_t m = grammar.minSteps(s.text);
        if (m == kUnreachable) return;
        pending += m;
      }
    if (pending == 0) {
      if (!visit(d, form)) stop = true;
      return;
    }
    if (d.steps.size() + pending > K) return;
    auto pos = static_cast<std::size_t>(leftmost(form) - form.begin());
    const std::string nt = form[pos].text;
    for (auto ri : grammar.rulesFor(nt)) {
      const auto& r = grammar.rules()[ri];
      std::vector<GrammarSymbol> next(form.begin(), form.begin() + static_cast<std::ptrdiff_t>(pos));
      next.insert(next.end(), r.rhs.begin(), r.rhs.end());
      next.insert(next.end(), form.begin() + static_cast<std::ptrdiff_t>(pos) + 1, form.end());
      d.steps.push_back(r.id);
      expand(next);
      d.steps.pop_back();
      if (stop) return;
    }
  };
  std::vector<GrammarSymbol> form{{true, grammar.start()}};
  expand(form);
}

std::vector<DerivedTask> enumerateDerivations(const Grammar& grammar, std::size_t K, const logic::Vocabulary& vocabulary) {
  std::vector<DerivedTask> out;
  forEachDerivation(grammar, K, [&](const Derivation& d, const std::vector<GrammarSymbol>& sentence) {
    out.push_back({d, parseTask(sentenceText(sentence), vocabulary)});
    return true;
  });
  return out;
}

}  // namespace robotval::tasks
