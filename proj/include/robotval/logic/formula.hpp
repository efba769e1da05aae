#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robotval::logic {

/// Name of an element of the finite object set.
using ObjectId = std::string;

/// Sort every quantifier and parameter defaults to: the full object set.
inline constexpr std::string_view kDefaultSort = "obj";

/// Canonical free situation variable used by preconditions, tests and WPs.
inline constexpr std::string_view kSituationVariable = "s";

/// An object-sorted term: a constant naming an object, or a variable.
class Term {
 public:
  enum class Kind : std::uint8_t { Constant, Variable };

  static Term constant(std::string name) { return Term(Kind::Constant, std::move(name)); }
  static Term variable(std::string name) { return Term(Kind::Variable, std::move(name)); }

  Kind kind() const noexcept { return kind_; }
  bool isConstant() const noexcept { return kind_ == Kind::Constant; }
  bool isVariable() const noexcept { return kind_ == Kind::Variable; }
  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
};

/// An operation instance `name(args...)`; ground when every argument is a constant.
struct Action {
  std::string name;
  std::vector<Term> args;

  bool ground() const;
  std::vector<ObjectId> objects() const;  ///< requires ground()

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

/// Builds a ground action from object names.
Action groundAction(std::string name, std::vector<ObjectId> objects);

/// Situation term: the initial situation s0, a situation variable, or do(a, s).
class Situation {
 public:
  enum class Kind : std::uint8_t { Initial, Variable, Do };

  static Situation initial();
  static Situation variable(std::string name);
  static Situation doing(Action action, Situation predecessor);

  Kind kind() const noexcept;
  bool isInitial() const noexcept { return kind() == Kind::Initial; }
  bool isVariable() const noexcept { return kind() == Kind::Variable; }
  bool isDo() const noexcept { return kind() == Kind::Do; }

  const std::string& variableName() const;  ///< Variable only
  const Action& action() const;             ///< Do only
  const Situation& predecessor() const;     ///< Do only

  std::size_t depth() const noexcept;
  bool ground() const;  ///< no situation variable and all actions ground
  std::size_t hash() const noexcept;

  friend bool operator==(const Situation& a, const Situation& b);

 private:
  struct Node;
  explicit Situation(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct SituationHash {
  std::size_t operator()(const Situation& s) const noexcept { return s.hash(); }
};

enum class FormulaKind : std::uint8_t {
  True,
  False,
  Rigid,     ///< P(terms)
  Fluent,    ///< F(terms)@situation
  Equal,     ///< t1 = t2 between object terms
  ActionEq,  ///< alpha = op(terms), alpha being the action of a successor axiom
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,
  Forall,
};

struct FormulaNode;

/// Immutable first-order formula with structural equality.
class Formula {
 public:
  Formula();  ///< true

  static Formula top();
  static Formula bottom();
  static Formula boolean(bool value) { return value ? top() : bottom(); }
  static Formula rigid(std::string name, std::vector<Term> args);
  static Formula fluent(std::string name, std::vector<Term> args, Situation situation);
  static Formula equal(Term lhs, Term rhs);
  static Formula actionIs(std::string operation, std::vector<Term> args);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula equivalence(Formula a, Formula b);
  static Formula exists(std::string var, std::string sort, Formula body);
  static Formula forall(std::string var, std::string sort, Formula body);

  /// Left-nested conjunction/disjunction; empty lists give true/false.
  static Formula conjunction(std::span<const Formula> parts);
  static Formula disjunction(std::span<const Formula> parts);

  FormulaKind kind() const noexcept;
  bool isAtom() const noexcept;        ///< Rigid, Fluent, Equal or ActionEq
  bool isQuantifier() const noexcept;  ///< Exists or Forall
  bool isConstant() const noexcept { return kind() == FormulaKind::True || kind() == FormulaKind::False; }

  /// Predicate name (atoms), operation name (ActionEq) or bound variable (quantifiers).
  const std::string& symbol() const;
  const std::string& sort() const;  ///< quantifiers
  const std::vector<Term>& terms() const;
  const Situation& situation() const;  ///< Fluent only
  std::size_t arity() const noexcept;  ///< number of sub-formulas
  const Formula& child(std::size_t i) const;
  const Formula& body() const { return child(0); }

  std::size_t hash() const noexcept;
  std::size_t size() const;  ///< number of nodes

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  static Formula make(FormulaNode node);

  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  FormulaKind kind = FormulaKind::True;
  std::string symbol;
  std::string sort;
  std::vector<Term> terms;
  std::optional<Situation> situation;
  std::vector<Formula> children;
  std::size_t hash = 0;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// phi[var/value]: replaces free occurrences of an object variable by a constant.
/// Throws SubstitutionError when `var` occurs as a situation variable.
Formula substitute(const Formula& phi, std::string_view var, const ObjectId& value);

/// phi[var/value]: replaces a situation variable by a situation term.
/// Throws SubstitutionError when `var` occurs as an object variable.
Formula substitute(const Formula& phi, std::string_view var, const Situation& value);

/// Capture-avoiding replacement of a free object variable by an arbitrary term;
/// bound variables that would capture `value` are renamed.
Formula substituteTerm(const Formula& phi, std::string_view var, const Term& value);

/// Replaces every free object variable named in `vars` by the matching constant.
Formula instantiate(const Formula& phi, std::span<const std::string> vars, std::span<const ObjectId> values);

/// Resolves `alpha = op(...)` atoms against a ground action.
Formula bindAction(const Formula& phi, const Action& alpha);

/// Applies `fn` to every fluent atom and rebuilds the formula (no simplification).
Formula mapFluents(const Formula& phi, const std::function<Formula(const Formula&)>& fn);

std::set<std::string> freeObjectVariables(const Formula& phi);
std::set<std::string> situationVariables(const Formula& phi);
bool occursFree(const Formula& phi, std::string_view var);

/// No free object variables (situation variables are tracked separately).
bool isVariableFree(const Formula& phi);

/// Facts the simplifier may fold; everything optional.
class SimplifyContext {
 public:
  virtual ~SimplifyContext() = default;
  /// Truth of a ground rigid atom, if known.
  virtual std::optional<bool> rigid(const std::string& name, std::span<const ObjectId> args) const = 0;
  /// Size of a sort's domain, if known.
  virtual std::optional<std::size_t> domainSize(const std::string& sort) const = 0;
};

/// Constant folding: true/false propagation, double negation, ground equalities,
/// flattening of &/| chains with duplicate removal, the one-point rule for quantifiers over
/// the default sort, and (with a context) ground rigid atoms.
Formula simplify(const Formula& phi, const SimplifyContext* context = nullptr);

/// Object domains for quantifier expansion.
class DomainProvider {
 public:
  virtual ~DomainProvider() = default;
  virtual const std::vector<ObjectId>& domain(const std::string& sort) const = 0;
};

/// Replaces every quantifier by the finite disjunction/conjunction over its domain.
Formula expandQuantifiers(const Formula& phi, const DomainProvider& domains);

}  // namespace robotval::logic

template <>
struct std::hash<robotval::logic::Formula> {
  std::size_t operator()(const robotval::logic::Formula& f) const noexcept { return f.hash(); }
};
