#include <limits>
#include <map>
#include <unordered_map>

#include "robotval/ct/model.hpp"
#include "robotval/errors.hpp"

namespace robotval::ct {

namespace {

/// Constraints are checked as soon as their last parameter (in order) is set.
/// Implications and negations whose antecedent is a conjunction of equalities
/// are indexed by the antecedent's values so only matching ones are evaluated.
class ConstraintIndex {
 public:
  explicit ConstraintIndex(const CtModel& model) : model_(model), plain_(model.parameters.size()),
                                                   guarded_(model.parameters.size()) {
    for (std::size_t c = 0; c < model.constraints.size(); ++c) {
      const CtExpr& e = model.constraints[c].expr;
      auto scope = e.scope();
      if (scope.empty()) {
        if (!e.evaluate({})) unsatisfiable_ = true;
        continue;
      }
      const std::size_t last = scope.back();
      std::vector<std::size_t> guardParams, guardValues;
      if (!guardOf(e, guardParams, guardValues)) {
        plain_[last].push_back(c);
        continue;
      }
      std::optional<std::uint64_t> key = encode(guardParams, guardValues);
      if (!key) {
        plain_[last].push_back(c);
        continue;
      }
      auto& groups = guarded_[last];
      Group* g = nullptr;
      for (auto& existing : groups)
        if (existing.params == guardParams) g = &existing;
      if (g == nullptr) {
        groups.push_back(Group{guardParams, {}});
        g = &groups.back();
      }
      g->byKey[*key].push_back(c);
    }
  }

  bool unsatisfiable() const noexcept { return unsatisfiable_; }

  /// Every constraint whose last parameter is p holds under a (parameters up to p set).
  bool consistent(std::size_t p, const Assignment& a) const {
    for (auto c : plain_[p])
      if (!model_.constraints[c].expr.evaluate(a)) return false;
    for (const auto& g : guarded_[p]) {
      std::vector<std::size_t> values;
      values.reserve(g.params.size());
      for (auto q : g.params) values.push_back(a[q]);
      auto it = g.byKey.find(*encode(g.params, values));
      if (it == g.byKey.end()) continue;
      for (auto c : it->second)
        if (!model_.constraints[c].expr.evaluate(a)) return false;
    }
    return true;
  }

 private:
  struct Group {
    std::vector<std::size_t> params;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> byKey;
  };

  static bool equalities(const CtExpr& e, std::map<std::size_t, std::size_t>& out) {
    if (e.kind() == CtExpr::Kind::Eq) return out.emplace(e.parameter(), e.value()).second;
    if (e.kind() != CtExpr::Kind::And) return false;
    for (const auto& c : e.children())
      if (!equalities(c, out)) return false;
    return true;
  }

  static bool guardOf(const CtExpr& e, std::vector<std::size_t>& params, std::vector<std::size_t>& values) {
    const CtExpr* guard = nullptr;
    if (e.kind() == CtExpr::Kind::Implies || e.kind() == CtExpr::Kind::Not) guard = &e.children()[0];
    if (guard == nullptr) return false;
    std::map<std::size_t, std::size_t> eqs;
    if (!equalities(*guard, eqs) || eqs.empty()) return false;
    for (const auto& [p, v] : eqs) {
      params.push_back(p);
      values.push_back(v);
    }
    return true;
  }

  std::optional<std::uint64_t> encode(const std::vector<std::size_t>& params,
                                      const std::vector<std::size_t>& values) const {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const std::uint64_t radix = model_.parameters[params[i]].domain.size();
      if (key > (std::numeric_limits<std::uint64_t>::max() - values[i]) / radix) return std::nullopt;
      key = key * radix + values[i];
    }
    return key;
  }

  const CtModel& model_;
  std::vector<std::vector<std::size_t>> plain_;
  std::vector<std::vector<Group>> guarded_;
  bool unsatisfiable_ = false;
};

void search(const CtModel& model, const std::vector<std::optional<std::size_t>>* fixed,
            const std::function<bool(const Assignment&)>& visit) {
  ConstraintIndex index(model);
  if (index.unsatisfiable()) return;
  const std::size_t n = model.parameters.size();
  Assignment a(n, 0);
  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t p) {
    if (p == n) {
      if (!visit(a)) stop = true;
      return;
    }
    const std::size_t size = model.parameters[p].domain.size();
    for (std::size_t v = 0; v < size && !stop; ++v) {
      if (fixed && (*fixed)[p] && *(*fixed)[p] != v) continue;
      a[p] = v;
      if (index.consistent(p, a)) go(p + 1);
    }
  };
  if (n == 0) {
    visit(a);
    return;
  }
  go(0);
}

}  // namespace

void forEachValid(const CtModel& model, const std::function<bool(const Assignment&)>& visit) {
  search(model, nullptr, visit);
}

std::vector<Assignment> enumerateValid(const CtModel& model) {
  std::vector<Assignment> out;
  forEachValid(model, [&](const Assignment& a) {
    out.push_back(a);
    return true;
  });
  return out;
}

bool isCoverable(const CtModel& model, const std::vector<std::optional<std::size_t>>& partial) {
  if (partial.size() != model.parameters.size()) throw ModelError("partial assignment has the wrong number of slots");
  bool found = false;
  search(model, &partial, [&](const Assignment&) {
    found = true;
    return false;
  });
  return found;
}

}  // namespace robotval::ct
