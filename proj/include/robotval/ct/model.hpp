#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "robotval/action/theory.hpp"
#include "robotval/tasks/grammar.hpp"
#include "robotval/tasks/task.hpp"

namespace robotval::ct {

using action::ActionTheory;
using action::WorldState;

/// Value name for an unused tuple slot or derivation step.
inline constexpr std::string_view kEpsilon = "eps";

enum class ParameterKind {
  Flag,   ///< truth of a nullary or unary fluent instance
  Tuple,  ///< one component of an n-ary fluent tuple
  Step,   ///< d_k, the k-th rule of the derivation
};

struct CtParameter {
  std::string name;
  std::vector<std::string> domain;  ///< value order is the order used for enumeration and tie-breaking
  ParameterKind kind = ParameterKind::Flag;
  std::string family;         ///< fluent name (Flag, Tuple)
  std::vector<std::string> args;  ///< Flag: the fluent's arguments
  std::size_t instance = 0;   ///< Tuple: 1-based tuple index; Step: k
  std::size_t component = 0;  ///< Tuple: 1-based argument position

  std::size_t valueIndex(std::string_view value) const;  ///< throws ModelError
};

/// Boolean expression over `parameter = value` atoms, values held as domain indices.
class CtExpr {
 public:
  enum class Kind : std::uint8_t { True, False, Eq, Not, And, Or, Implies };

  CtExpr() = default;  ///< true
  static CtExpr top() { return CtExpr(); }
  static CtExpr bottom();
  static CtExpr eq(std::size_t parameter, std::size_t value);
  static CtExpr negation(CtExpr e);
  static CtExpr conjunction(std::vector<CtExpr> parts);  ///< flattened; constants folded
  static CtExpr disjunction(std::vector<CtExpr> parts);
  static CtExpr implication(CtExpr a, CtExpr b);

  Kind kind() const noexcept { return kind_; }
  std::size_t parameter() const noexcept { return parameter_; }
  std::size_t value() const noexcept { return value_; }
  const std::vector<CtExpr>& children() const noexcept { return children_; }

  bool evaluate(const std::vector<std::size_t>& assignment) const;
  /// Parameters mentioned, ascending.
  std::vector<std::size_t> scope() const;

 private:
  Kind kind_ = Kind::True;
  std::size_t parameter_ = 0;
  std::size_t value_ = 0;
  std::vector<CtExpr> children_;
};

struct CtConstraint {
  CtExpr expr;
  std::string origin;  ///< short label: "symmetry", "D0", "grammar", "wp", "block"
};

/// How many tuples an n-ary family gets and where the number came from.
struct FamilyBound {
  std::string family;
  std::size_t arity = 0;
  std::size_t bound = 0;
  bool fromInitialWorlds = true;  ///< false: fell back to |O|^n
};

/// One syntactically valid derivation and its accomplishability.
struct DerivationInfo {
  tasks::Derivation derivation;
  tasks::Task task;
  logic::Formula wp;
  std::size_t satisfyingWorlds = 0;  ///< initial worlds where WP holds
};

struct CtModel {
  std::vector<CtParameter> parameters;
  std::vector<CtConstraint> constraints;
  std::optional<std::size_t> strength;  ///< nullopt: full (every valid assignment)
  std::size_t depth = 0;
  std::vector<FamilyBound> bounds;
  std::vector<DerivationInfo> derivations;
  std::vector<std::string> warnings;

  std::size_t parameterIndex(std::string_view name) const;  ///< throws ModelError
};

using Assignment = std::vector<std::size_t>;  ///< value index per parameter

/// Builds the combinatorial model for derivations of at most K steps.
CtModel buildModel(const ActionTheory& theory, const tasks::Grammar& grammar, std::size_t K,
                   std::optional<std::size_t> strength = std::nullopt);

/// Translates a ground formula over fluents at s or s0 (no quantifiers, no
/// derived fluents) into parameter atoms.
CtExpr encodeFormula(const CtModel& model, const logic::Formula& phi);

bool satisfiesAll(const CtModel& model, const Assignment& a);

/// Every valid assignment in lexicographic order (parameter order, then domain
/// order); stops when the visitor returns false.
void forEachValid(const CtModel& model, const std::function<bool(const Assignment&)>& visit);
std::vector<Assignment> enumerateValid(const CtModel& model);

/// Whether some valid assignment agrees with the given partial assignment.
bool isCoverable(const CtModel& model, const std::vector<std::optional<std::size_t>>& partial);

struct CoveringResult {
  std::vector<Assignment> rows;
  std::size_t coverableTuples = 0;
  std::size_t validAssignments = 0;
};

/// Greedy t-way array: each new row is the valid assignment covering the most
/// still-uncovered coverable t-tuples, the lexicographically smallest on ties.
/// t = nullopt or t = parameter count gives every valid assignment.
CoveringResult generateCoveringArray(const CtModel& model, std::optional<std::size_t> t);
CoveringResult generateCoveringArray(const CtModel& model);  ///< uses model.strength

struct Configuration {
  WorldState initialWorld;
  tasks::Task task;
  tasks::Derivation derivation;
  Assignment assignment;
};

/// Decodes an assignment into (w0, tau). Throws InternalError if the result is
/// not a D0 world on which tau is accomplishable.
Configuration realizeConfiguration(const CtModel& model, const Assignment& a, const ActionTheory& theory,
                                   const tasks::Grammar& grammar);

/// Canonical assignment for (w, derivation): tuples of each family in object
/// order with epsilon padding, steps padded with epsilon. Nothing when w has more
/// true atoms in a family than its bound or the derivation is longer than K.
std::optional<Assignment> encodeConfiguration(const CtModel& model, const ActionTheory& theory, const WorldState& w,
                                              const tasks::Derivation& derivation);

std::string printAssignment(const CtModel& model, const Assignment& a);  ///< `name=value name=value ...`
std::string printExpr(const CtModel& model, const CtExpr& e);

}  // namespace robotval::ct
