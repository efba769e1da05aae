#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "robotval/logic/formula.hpp"

namespace robotval::logic {

/// Kleene truth value used for evaluation over partial assignments.
enum class Truth : std::uint8_t { False, True, Unknown };

/// A ground atom P(o1,...,on) without situation argument.
struct GroundAtom {
  std::string name;
  std::vector<ObjectId> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

/// Total truth assignment seen by `evaluate`. Implementations throw
/// TotalityError for atoms they cannot answer.
class Interpretation : public DomainProvider {
 public:
  virtual bool rigid(const std::string& name, std::span<const ObjectId> args) const = 0;
  virtual bool fluent(const std::string& name, std::span<const ObjectId> args, const Situation& situation) const = 0;
};

/// Assignment that may leave atoms open (returns nullopt).
class PartialInterpretation : public DomainProvider {
 public:
  virtual std::optional<bool> rigid(const std::string& name, std::span<const ObjectId> args) const = 0;
  virtual std::optional<bool> fluent(const std::string& name, std::span<const ObjectId> args,
                                     const Situation& situation) const = 0;
};

/// w |= phi. Quantifiers range over the interpretation's finite domains.
/// Throws ModelError on free object variables or unbound `alpha` atoms.
bool evaluate(const Interpretation& w, const Formula& phi);

/// Object variable bindings applied before evaluation (innermost binding wins).
using Bindings = std::vector<std::pair<std::string, ObjectId>>;

/// w |= phi[bindings]; avoids materializing the substituted formula.
bool evaluate(const Interpretation& w, const Formula& phi, const Bindings& bindings);

/// Kleene evaluation; Unknown when the open atoms decide the outcome.
Truth evaluatePartial(const PartialInterpretation& w, const Formula& phi);

/// w |= psi[s'/s] for every axiom psi, s' ranging over its situation variables.
bool checkAxioms(const Interpretation& w, std::span<const Formula> axioms, const Situation& s);

/// Explicit world: rigid truths plus fluent truths stored per situation.
/// Queries for situations that were never populated raise TotalityError.
class World : public Interpretation {
 public:
  explicit World(std::map<std::string, std::vector<ObjectId>> sorts);

  void setRigid(const GroundAtom& atom, bool value);
  void setFluent(const GroundAtom& atom, const Situation& situation, bool value);

  const std::vector<ObjectId>& domain(const std::string& sort) const override;
  bool rigid(const std::string& name, std::span<const ObjectId> args) const override;
  bool fluent(const std::string& name, std::span<const ObjectId> args, const Situation& situation) const override;

 private:
  std::map<std::string, std::vector<ObjectId>> sorts_;
  std::map<GroundAtom, bool> rigid_;
  std::unordered_map<Situation, std::map<GroundAtom, bool>, SituationHash> fluents_;
};

}  // namespace robotval::logic
