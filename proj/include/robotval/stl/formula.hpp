#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace robotval::stl {

enum class Comparator { Greater, GreaterEq, Less, LessEq };

enum class StlKind { True, False, Atom, Not, And, Or, Eventually, Always, Until };

/// Immutable STL formula. Atoms compare one named signal with a threshold;
/// temporal operators carry a bounded interval [a, b] relative to the evaluation time.
class StlFormula {
 public:
  StlFormula();  ///< true

  static StlFormula top();
  static StlFormula bottom();
  static StlFormula atom(std::string signal, Comparator cmp, double threshold, std::string label = {});
  static StlFormula negation(StlFormula f);
  static StlFormula conjunction(std::vector<StlFormula> parts);  ///< empty gives true
  static StlFormula disjunction(std::vector<StlFormula> parts);  ///< empty gives false
  static StlFormula eventually(double a, double b, StlFormula f);
  static StlFormula always(double a, double b, StlFormula f);
  static StlFormula until(double a, double b, StlFormula lhs, StlFormula rhs);

  StlKind kind() const noexcept;
  const std::string& signal() const;  ///< Atom
  Comparator comparator() const;      ///< Atom
  double threshold() const;           ///< Atom
  const std::string& label() const;   ///< Atom: the fluent instance it stands for, may be empty
  double lower() const;               ///< temporal operators
  double upper() const;
  const std::vector<StlFormula>& children() const;
  const void* id() const noexcept { return node_.get(); }

  std::size_t size() const;
  friend bool operator==(const StlFormula& a, const StlFormula& b);

 private:
  struct Node;
  explicit StlFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Shortest decimal text that reads back to the same double.
std::string formatNumber(double v);

/// Prefix form, e.g. `(F [0,8] (and (> door:o_m 80) (not (<= gap:o_b:o_m 0.01))))`.
/// Atom labels are not printed.
std::string print(const StlFormula& f);

/// Reads the prefix form back; throws ParseError.
StlFormula parseStl(std::string_view text);

/// Signals mentioned by atoms, sorted.
std::vector<std::string> signals(const StlFormula& f);

}  // namespace robotval::stl
