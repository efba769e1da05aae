#include "robotval/stl/trace.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "robotval/errors.hpp"
#include "robotval/stl/formula.hpp"

namespace robotval::stl {

Trace::Trace(std::vector<double> times, std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : times_(std::move(times)), names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size()) throw SpecError("trace has " + std::to_string(names_.size()) + " names but " +
                                                        std::to_string(columns_.size()) + " columns");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw SpecError("trace timestamps must be strictly increasing");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (columns_[i].size() != times_.size()) throw SpecError("signal " + names_[i] + " is not sampled at every instant");
    if (!index_.emplace(names_[i], i).second) throw SpecError("signal " + names_[i] + " appears twice");
  }
}

bool Trace::has(std::string_view signal) const { return index_.find(signal) != index_.end(); }

const std::vector<double>& Trace::column(std::string_view signal) const {
  auto it = index_.find(signal);
  if (it == index_.end()) throw SpecError("unknown signal " + std::string(signal));
  return columns_[it->second];
}

std::size_t Trace::indexAt(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) throw SpecError("time before the start of the trace");
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double Trace::value(std::string_view signal, double t) const { return column(signal)[indexAt(t)]; }

std::string toCsv(const Trace& trace) {
  std::string out = "time";
  for (const auto& n : trace.names()) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += formatNumber(trace.times()[i]);
    for (const auto& n : trace.names()) out += "," + formatNumber(trace.column(n)[i]);
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string> splitRow(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parseNumber(const std::string& s, std::size_t line) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "'", line);
  return v;
}

}  // namespace

Trace fromCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> columns;
  bool haveHeader = false;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = splitRow(line);
    if (!haveHeader) {
      haveHeader = true;
      if (cells.empty() || cells[0] != "time") throw ParseError("header must start with 'time'", lineNo);
      names.assign(cells.begin() + 1, cells.end());
      columns.resize(names.size());
      continue;
    }
    if (cells.size() != names.size() + 1)
      throw ParseError("expected " + std::to_string(names.size() + 1) + " fields", lineNo);
    times.push_back(parseNumber(cells[0], lineNo));
    for (std::size_t i = 0; i < names.size(); ++i) columns[i].push_back(parseNumber(cells[i + 1], lineNo));
  }
  if (!haveHeader) throw ParseError("empty trace");
  try {
    return Trace(std::move(times), std::move(names), std::move(columns));
  } catch (const SpecError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace robotval::stl
