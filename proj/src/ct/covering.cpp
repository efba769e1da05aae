#include <queue>
#include <unordered_set>

#include "robotval/ct/model.hpp"
#include "robotval/errors.hpp"

namespace robotval::ct {

namespace {

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t t) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(t);
  for (std::size_t i = 0; i < t; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    std::size_t i = t;
    while (i > 0 && c[i - 1] == n - t + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < t; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

std::uint64_t tupleCode(const CtModel& model, const std::vector<std::size_t>& combo, const Assignment& a) {
  std::uint64_t code = 0;
  for (auto p : combo) code = code * model.parameters[p].domain.size() + a[p];
  return code;
}

}  // namespace

CoveringResult generateCoveringArray(const CtModel& model) { return generateCoveringArray(model, model.strength); }

CoveringResult generateCoveringArray(const CtModel& model, std::optional<std::size_t> t) {
  const std::size_t n = model.parameters.size();
  if (t && *t == 0) throw ModelError("coverage strength must be at least 1");
  if (t && *t > n) throw ModelError("coverage strength exceeds the number of parameters");
  CoveringResult result;
  std::vector<Assignment> valid = enumerateValid(model);
  result.validAssignments = valid.size();
  if (!t || *t == n) {
    result.coverableTuples = valid.size();
    result.rows = std::move(valid);
    return result;
  }

  // Coverable t-tuples are exactly the projections of valid assignments.
  const auto combos = combinations(n, *t);
  std::vector<std::unordered_set<std::uint64_t>> uncovered(combos.size());
  for (const auto& a : valid)
    for (std::size_t c = 0; c < combos.size(); ++c) uncovered[c].insert(tupleCode(model, combos[c], a));
  std::size_t remaining = 0;
  for (const auto& u : uncovered) remaining += u.size();
  result.coverableTuples = remaining;

  auto gain = [&](const Assignment& a) {
    std::size_t g = 0;
    for (std::size_t c = 0; c < combos.size(); ++c) g += uncovered[c].count(tupleCode(model, combos[c], a));
    return g;
  };

  // Lazy greedy: gains only shrink, so a stale bound is an upper bound. Enumeration
  // order is lexicographic, so the smaller index wins ties.
  using Entry = std::pair<std::size_t, std::size_t>;  // (bound, index)
  auto worse = [](const Entry& x, const Entry& y) {
    return x.first != y.first ? x.first < y.first : x.second > y.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < valid.size(); ++i) heap.push({combos.size(), i});
  while (remaining > 0 && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    const std::size_t g = gain(valid[top.second]);
    if (g == 0) continue;
    if (!heap.empty() && worse(Entry{g, top.second}, heap.top())) {
      heap.push({g, top.second});
      continue;
    }
    const Assignment& row = valid[top.second];
    for (std::size_t c = 0; c < combos.size(); ++c) uncovered[c].erase(tupleCode(model, combos[c], row));
    remaining -= g;
    result.rows.push_back(row);
  }
  if (remaining > 0) throw InternalError("greedy selection left coverable tuples uncovered");
  return result;
}

}  // namespace robotval::ct
