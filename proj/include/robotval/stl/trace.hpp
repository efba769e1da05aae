#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace robotval::stl {

/// Signals sampled at shared, strictly increasing instants; between samples a
/// signal keeps its last sampled value.
class Trace {
 public:
  Trace() = default;
  Trace(std::vector<double> times, std::vector<std::string> names, std::vector<std::vector<double>> columns);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }

  bool has(std::string_view signal) const;
  /// Column of a signal; throws SpecError if unknown.
  const std::vector<double>& column(std::string_view signal) const;
  /// Value at time t (last sample at or before t); t must lie in [start, end].
  double value(std::string_view signal, double t) const;
  /// Index of the last sample at or before t.
  std::size_t indexAt(double t) const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<double> times_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// `time,<sig1>,<sig2>,...` with one row per sample; numbers in shortest round-trip form.
std::string toCsv(const Trace& trace);
Trace fromCsv(std::string_view text);  ///< throws ParseError

}  // namespace robotval::stl
