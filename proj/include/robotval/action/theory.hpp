#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "robotval/logic/formula.hpp"
#include "robotval/logic/syntax.hpp"
#include "robotval/logic/world.hpp"

namespace robotval::action {

using logic::Action;
using logic::Formula;
using logic::GroundAtom;
using logic::ObjectId;

enum class PredicateKind { Rigid, Primitive, Derived };

struct PredicateDecl {
  std::string name;
  std::size_t arity = 0;
  PredicateKind kind = PredicateKind::Rigid;
};

/// Poss(name(params), s) <-> precondition. The precondition mentions the
/// parameters as free object variables and `s` as its situation.
struct OperationDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> paramSorts;
  Formula precondition;
};

/// F(params, do(alpha, s)) <-> gammaPlus | (F(params, s) & !gammaMinus).
struct SuccessorAxiom {
  std::string fluent;
  std::vector<std::string> params;
  Formula gammaPlus;
  Formula gammaMinus;
};

struct DerivedFluentDef {
  enum class Kind { TransitiveClosure, Explicit };
  std::string fluent;
  Kind kind = Kind::Explicit;
  std::string closureOf;            ///< TransitiveClosure
  std::vector<std::string> params;  ///< Explicit
  Formula definition;               ///< Explicit; situation variable `s`
};

/// Dense index of the ground instances of a set of fluent families, each over O^arity.
class AtomLayout {
 public:
  struct Family {
    std::string name;
    std::size_t arity;
    std::size_t offset;
    std::size_t count;
  };

  AtomLayout() = default;
  AtomLayout(std::vector<ObjectId> objects, const std::vector<PredicateDecl>& families);

  std::size_t size() const noexcept { return size_; }
  const std::vector<Family>& families() const noexcept { return families_; }
  const Family* find(const std::string& name) const;
  /// Index of F(args); throws ModelError for unknown families or objects.
  std::size_t index(const std::string& name, std::span<const ObjectId> args) const;
  GroundAtom atom(std::size_t index) const;

 private:
  std::vector<ObjectId> objects_;
  std::map<ObjectId, std::size_t> objectIndex_;
  std::vector<Family> families_;
  std::size_t size_ = 0;
};

/// Truth of every ground primitive-fluent atom at one situation. Derived
/// fluents are never stored here.
class WorldState {
 public:
  WorldState() = default;
  explicit WorldState(std::size_t atoms) : bits_(atoms, false) {}

  bool get(std::size_t i) const { return bits_.at(i); }
  void set(std::size_t i, bool v) { bits_.at(i) = v; }
  std::size_t size() const noexcept { return bits_.size(); }
  const std::vector<bool>& bits() const noexcept { return bits_; }

  friend bool operator==(const WorldState&, const WorldState&) = default;
  friend auto operator<=>(const WorldState& a, const WorldState& b) { return a.bits_ <=> b.bits_; }

 private:
  std::vector<bool> bits_;
};

struct WorldStateHash {
  std::size_t operator()(const WorldState& w) const noexcept { return std::hash<std::vector<bool>>{}(w.bits()); }
};

/// A world state together with the computed derived-fluent truths.
struct DerivedState {
  WorldState primitive;
  std::vector<bool> derived;

  friend bool operator==(const DerivedState&, const DerivedState&) = default;
};

class ActionTheory : public logic::DomainProvider, public logic::SimplifyContext {
 public:
  struct Definition {
    std::vector<ObjectId> objects;
    std::map<std::string, std::vector<ObjectId>> sorts;  ///< "obj" is added automatically
    std::vector<PredicateDecl> predicates;
    std::set<GroundAtom> rigidTruths;
    std::vector<OperationDecl> operations;
    std::vector<SuccessorAxiom> successors;
    std::vector<DerivedFluentDef> derived;
    std::vector<Formula> initialAxioms;
  };

  /// Validates the definition; throws ModelError on any inconsistency.
  explicit ActionTheory(Definition def);

  const std::vector<ObjectId>& objects() const noexcept { return def_.objects; }
  const std::vector<PredicateDecl>& predicates() const noexcept { return def_.predicates; }
  const PredicateDecl& predicate(const std::string& name) const;
  const std::vector<OperationDecl>& operations() const noexcept { return def_.operations; }
  const OperationDecl& operation(const std::string& name) const;
  const SuccessorAxiom& successor(const std::string& fluent) const;
  const std::vector<DerivedFluentDef>& derivedDefinitions() const noexcept { return derivedOrder_; }
  const std::vector<Formula>& initialAxioms() const noexcept { return def_.initialAxioms; }
  const std::map<std::string, std::vector<ObjectId>>& sorts() const noexcept { return def_.sorts; }

  const AtomLayout& primitiveLayout() const noexcept { return primitive_; }
  const AtomLayout& derivedLayout() const noexcept { return derived_; }

  bool rigidTruth(const std::string& name, std::span<const ObjectId> args) const;
  const std::set<GroundAtom>& rigidTruths() const noexcept { return def_.rigidTruths; }

  /// Every ground instance of every operation, in declaration then lexicographic order.
  std::vector<Action> groundActions() const;
  /// Throws ModelError for an undeclared operation, wrong arity, unknown objects or sort violations.
  void checkGroundAction(const Action& a) const;

  logic::Vocabulary vocabulary() const;

  const std::vector<ObjectId>& domain(const std::string& sort) const override;
  std::optional<bool> rigid(const std::string& name, std::span<const ObjectId> args) const override;
  std::optional<std::size_t> domainSize(const std::string& sort) const override;

 private:
  Definition def_;
  std::map<std::string, std::size_t> predicateIndex_;
  std::map<std::string, std::size_t> operationIndex_;
  std::map<std::string, std::size_t> successorIndex_;
  std::vector<DerivedFluentDef> derivedOrder_;  ///< dependency order
  AtomLayout primitive_;
  AtomLayout derived_;
};

/// Interpretation of a (derived) state at situation `s` or any ground situation
/// standing for it; rigid atoms come from the theory.
class StateView : public logic::Interpretation {
 public:
  StateView(const ActionTheory& theory, const DerivedState& state) : theory_(theory), state_(state) {}

  const std::vector<ObjectId>& domain(const std::string& sort) const override { return theory_.domain(sort); }
  bool rigid(const std::string& name, std::span<const ObjectId> args) const override;
  bool fluent(const std::string& name, std::span<const ObjectId> args, const logic::Situation& situation) const override;

 private:
  const ActionTheory& theory_;
  const DerivedState& state_;
};

DerivedState computeDerived(const ActionTheory& theory, const WorldState& ws);

/// Truth of a formula whose fluents all refer to the state's situation.
bool holds(const ActionTheory& theory, const DerivedState& state, const Formula& phi);

bool possible(const ActionTheory& theory, const DerivedState& state, const Action& op);
bool possible(const ActionTheory& theory, const WorldState& ws, const Action& op);

/// Throws PreconditionViolation when the operation is not possible.
WorldState progress(const ActionTheory& theory, const WorldState& ws, const Action& op);
WorldState progress(const ActionTheory& theory, const DerivedState& state, const Action& op);

/// Calls `yield` for every world satisfying D0, in a fixed order; stops early if it returns false.
void forEachInitialWorld(const ActionTheory& theory, const std::function<bool(const WorldState&)>& yield);
std::vector<WorldState> enumerateInitialWorlds(const ActionTheory& theory);

/// D0 holds in ws (with ws standing for s0).
bool satisfiesInitialAxioms(const ActionTheory& theory, const WorldState& ws);

/// Replaces derived-fluent atoms by formulas over primitive fluents. Transitive
/// closures are unrolled to simple paths of at most |O| edges.
Formula unfoldDerived(const ActionTheory& theory, const Formula& phi);

/// True primitive atoms, in layout order.
std::vector<GroundAtom> trueAtoms(const ActionTheory& theory, const WorldState& ws);
WorldState worldFromAtoms(const ActionTheory& theory, std::span<const GroundAtom> atoms);

/// `{Loc(o_b,o_t), IsOpen(o_m)}`
std::string describe(const ActionTheory& theory, const WorldState& ws);
std::string describe(const GroundAtom& atom);

}  // namespace robotval::action
