#include "robotval/logic/formula.hpp"

#include <algorithm>
#include <unordered_set>

#include "robotval/errors.hpp"

namespace robotval::logic {

namespace {

std::size_t combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hashTerms(std::size_t seed, const std::vector<Term>& terms) {
  for (const auto& t : terms) {
    seed = combine(seed, static_cast<std::size_t>(t.kind()));
    seed = combine(seed, std::hash<std::string>{}(t.name()));
  }
  return seed;
}

}  // namespace

// ---------------------------------------------------------------------------
// Action

bool Action::ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.isConstant(); });
}

std::vector<ObjectId> Action::objects() const {
  std::vector<ObjectId> out;
  out.reserve(args.size());
  for (const auto& t : args) {
    if (!t.isConstant()) throw GroundingError("operation " + name + " has variable argument " + t.name());
    out.push_back(t.name());
  }
  return out;
}

Action groundAction(std::string name, std::vector<ObjectId> objects) {
  Action a{std::move(name), {}};
  a.args.reserve(objects.size());
  for (auto& o : objects) a.args.push_back(Term::constant(std::move(o)));
  return a;
}

// ---------------------------------------------------------------------------
// Situation

struct Situation::Node {
  Kind kind;
  std::string variable;
  Action action;
  std::optional<Situation> predecessor;
  std::size_t depth = 0;
  std::size_t hash = 0;
};

Situation Situation::initial() {
  static const Situation s0 = [] {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Initial;
    node->hash = 0x51u;
    return Situation(std::move(node));
  }();
  return s0;
}

Situation Situation::variable(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Variable;
  node->hash = combine(0x77u, std::hash<std::string>{}(name));
  node->variable = std::move(name);
  return Situation(std::move(node));
}

Situation Situation::doing(Action action, Situation predecessor) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Do;
  std::size_t h = combine(0xd0u, std::hash<std::string>{}(action.name));
  h = hashTerms(h, action.args);
  node->hash = combine(h, predecessor.hash());
  node->depth = predecessor.depth() + 1;
  node->action = std::move(action);
  node->predecessor = std::move(predecessor);
  return Situation(std::move(node));
}

Situation::Kind Situation::kind() const noexcept { return node_->kind; }

const std::string& Situation::variableName() const {
  if (node_->kind != Kind::Variable) throw InternalError("situation is not a variable");
  return node_->variable;
}

const Action& Situation::action() const {
  if (node_->kind != Kind::Do) throw InternalError("situation is not a do-term");
  return node_->action;
}

const Situation& Situation::predecessor() const {
  if (node_->kind != Kind::Do) throw InternalError("situation is not a do-term");
  return *node_->predecessor;
}

std::size_t Situation::depth() const noexcept { return node_->depth; }

bool Situation::ground() const {
  switch (node_->kind) {
    case Kind::Initial: return true;
    case Kind::Variable: return false;
    case Kind::Do: return node_->action.ground() && node_->predecessor->ground();
  }
  return false;
}

std::size_t Situation::hash() const noexcept { return node_->hash; }

bool operator==(const Situation& a, const Situation& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Situation::Kind::Initial: return true;
    case Situation::Kind::Variable: return a.node_->variable == b.node_->variable;
    case Situation::Kind::Do:
      return a.node_->action == b.node_->action && *a.node_->predecessor == *b.node_->predecessor;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Formula construction

Formula::Formula() : Formula(top()) {}

Formula Formula::make(FormulaNode node) {
  std::size_t h = combine(0xf0u, static_cast<std::size_t>(node.kind));
  h = combine(h, std::hash<std::string>{}(node.symbol));
  h = combine(h, std::hash<std::string>{}(node.sort));
  h = hashTerms(h, node.terms);
  if (node.situation) h = combine(h, node.situation->hash());
  for (const auto& c : node.children) h = combine(h, c.hash());
  node.hash = h;
  return Formula(std::make_shared<const FormulaNode>(std::move(node)));
}

Formula Formula::top() {
  static const Formula t = make([] {
    FormulaNode n;
    n.kind = FormulaKind::True;
    return n;
  }());
  return t;
}

Formula Formula::bottom() {
  static const Formula f = make([] {
    FormulaNode n;
    n.kind = FormulaKind::False;
    return n;
  }());
  return f;
}

Formula Formula::rigid(std::string name, std::vector<Term> args) {
  FormulaNode n;
  n.kind = FormulaKind::Rigid;
  n.symbol = std::move(name);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::fluent(std::string name, std::vector<Term> args, Situation situation) {
  FormulaNode n;
  n.kind = FormulaKind::Fluent;
  n.symbol = std::move(name);
  n.terms = std::move(args);
  n.situation = std::move(situation);
  return make(std::move(n));
}

Formula Formula::equal(Term lhs, Term rhs) {
  FormulaNode n;
  n.kind = FormulaKind::Equal;
  n.terms = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::actionIs(std::string operation, std::vector<Term> args) {
  FormulaNode n;
  n.kind = FormulaKind::ActionEq;
  n.symbol = std::move(operation);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::negation(Formula f) {
  FormulaNode n;
  n.kind = FormulaKind::Not;
  n.children = {std::move(f)};
  return make(std::move(n));
}

namespace {
Formula binary(FormulaKind kind, Formula a, Formula b, Formula (*mk)(FormulaNode)) {
  FormulaNode n;
  n.kind = kind;
  n.children = {std::move(a), std::move(b)};
  return mk(std::move(n));
}
}  // namespace

Formula Formula::conjunction(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b), &Formula::make); }
Formula Formula::disjunction(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b), &Formula::make); }
Formula Formula::implication(Formula a, Formula b) { return binary(FormulaKind::Implies, std::move(a), std::move(b), &Formula::make); }
Formula Formula::equivalence(Formula a, Formula b) { return binary(FormulaKind::Iff, std::move(a), std::move(b), &Formula::make); }

Formula Formula::exists(std::string var, std::string sort, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Exists;
  n.symbol = std::move(var);
  n.sort = std::move(sort);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::forall(std::string var, std::string sort, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Forall;
  n.symbol = std::move(var);
  n.sort = std::move(sort);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::conjunction(std::span<const Formula> parts) {
  if (parts.empty()) return top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conjunction(acc, parts[i]);
  return acc;
}

Formula Formula::disjunction(std::span<const Formula> parts) {
  if (parts.empty()) return bottom();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disjunction(acc, parts[i]);
  return acc;
}

FormulaKind Formula::kind() const noexcept { return node_->kind; }

bool Formula::isAtom() const noexcept {
  switch (node_->kind) {
    case FormulaKind::Rigid:
    case FormulaKind::Fluent:
    case FormulaKind::Equal:
    case FormulaKind::ActionEq: return true;
    default: return false;
  }
}

bool Formula::isQuantifier() const noexcept {
  return node_->kind == FormulaKind::Exists || node_->kind == FormulaKind::Forall;
}

const std::string& Formula::symbol() const { return node_->symbol; }
const std::string& Formula::sort() const { return node_->sort; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }

const Situation& Formula::situation() const {
  if (!node_->situation) throw InternalError("formula has no situation term");
  return *node_->situation;
}

std::size_t Formula::arity() const noexcept { return node_->children.size(); }
const Formula& Formula::child(std::size_t i) const { return node_->children.at(i); }
std::size_t Formula::hash() const noexcept { return node_->hash; }

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.symbol != y.symbol || x.sort != y.sort || x.terms != y.terms ||
      x.children.size() != y.children.size())
    return false;
  if (x.situation.has_value() != y.situation.has_value()) return false;
  if (x.situation && !(*x.situation == *y.situation)) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!(x.children[i] == y.children[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Traversal helpers

namespace {

Formula rebuild(const Formula& phi, std::vector<Formula> children) {
  switch (phi.kind()) {
    case FormulaKind::Not: return Formula::negation(std::move(children[0]));
    case FormulaKind::And: return Formula::conjunction(std::move(children[0]), std::move(children[1]));
    case FormulaKind::Or: return Formula::disjunction(std::move(children[0]), std::move(children[1]));
    case FormulaKind::Implies: return Formula::implication(std::move(children[0]), std::move(children[1]));
    case FormulaKind::Iff: return Formula::equivalence(std::move(children[0]), std::move(children[1]));
    case FormulaKind::Exists: return Formula::exists(phi.symbol(), phi.sort(), std::move(children[0]));
    case FormulaKind::Forall: return Formula::forall(phi.symbol(), phi.sort(), std::move(children[0]));
    default: return phi;
  }
}

bool termsMention(const std::vector<Term>& terms, std::string_view var) {
  return std::any_of(terms.begin(), terms.end(),
                     [&](const Term& t) { return t.isVariable() && t.name() == var; });
}

bool situationMentionsObjectVar(const Situation& s, std::string_view var) {
  for (const Situation* cur = &s; cur->isDo(); cur = &cur->predecessor())
    if (termsMention(cur->action().args, var)) return true;
  return false;
}

bool situationMentionsSituationVar(const Situation& s, std::string_view var) {
  const Situation* cur = &s;
  while (cur->isDo()) cur = &cur->predecessor();
  return cur->isVariable() && cur->variableName() == var;
}

void collectSituationVars(const Situation& s, std::set<std::string>& out) {
  const Situation* cur = &s;
  while (cur->isDo()) cur = &cur->predecessor();
  if (cur->isVariable()) out.insert(cur->variableName());
}

void collectFree(const Formula& phi, std::set<std::string>& bound, std::set<std::string>& out) {
  auto addTerms = [&](const std::vector<Term>& terms) {
    for (const auto& t : terms)
      if (t.isVariable() && !bound.contains(t.name())) out.insert(t.name());
  };
  switch (phi.kind()) {
    case FormulaKind::Rigid:
    case FormulaKind::Equal:
    case FormulaKind::ActionEq: addTerms(phi.terms()); return;
    case FormulaKind::Fluent:
      addTerms(phi.terms());
      for (const Situation* cur = &phi.situation(); cur->isDo(); cur = &cur->predecessor()) addTerms(cur->action().args);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool fresh = bound.insert(phi.symbol()).second;
      collectFree(phi.body(), bound, out);
      if (fresh) bound.erase(phi.symbol());
      return;
    }
    default:
      for (std::size_t i = 0; i < phi.arity(); ++i) collectFree(phi.child(i), bound, out);
  }
}

bool mentionsSituationVar(const Formula& phi, std::string_view var) {
  if (phi.kind() == FormulaKind::Fluent) return situationMentionsSituationVar(phi.situation(), var);
  for (std::size_t i = 0; i < phi.arity(); ++i)
    if (mentionsSituationVar(phi.child(i), var)) return true;
  return false;
}

bool mentionsName(const Formula& phi, const std::string& name) {
  if (phi.isQuantifier() && phi.symbol() == name) return true;
  if (termsMention(phi.terms(), name)) return true;
  if (phi.kind() == FormulaKind::Fluent && situationMentionsObjectVar(phi.situation(), name)) return true;
  for (std::size_t i = 0; i < phi.arity(); ++i)
    if (mentionsName(phi.child(i), name)) return true;
  return false;
}

Term replaceTerm(const Term& t, std::string_view var, const Term& value) {
  return (t.isVariable() && t.name() == var) ? value : t;
}

std::vector<Term> replaceTerms(const std::vector<Term>& terms, std::string_view var, const Term& value) {
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(replaceTerm(t, var, value));
  return out;
}

Situation replaceInSituation(const Situation& s, std::string_view var, const Term& value) {
  if (!s.isDo()) return s;
  if (!situationMentionsObjectVar(s, var)) return s;
  Action a{s.action().name, replaceTerms(s.action().args, var, value)};
  return Situation::doing(std::move(a), replaceInSituation(s.predecessor(), var, value));
}

Situation replaceSituationVar(const Situation& s, std::string_view var, const Situation& value) {
  switch (s.kind()) {
    case Situation::Kind::Initial: return s;
    case Situation::Kind::Variable: return s.variableName() == var ? value : s;
    case Situation::Kind::Do:
      return Situation::doing(s.action(), replaceSituationVar(s.predecessor(), var, value));
  }
  return s;
}

Formula substituteTermImpl(const Formula& phi, std::string_view var, const Term& value) {
  switch (phi.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return phi;
    case FormulaKind::Rigid:
      if (!termsMention(phi.terms(), var)) return phi;
      return Formula::rigid(phi.symbol(), replaceTerms(phi.terms(), var, value));
    case FormulaKind::Fluent:
      if (!termsMention(phi.terms(), var) && !situationMentionsObjectVar(phi.situation(), var)) return phi;
      return Formula::fluent(phi.symbol(), replaceTerms(phi.terms(), var, value),
                             replaceInSituation(phi.situation(), var, value));
    case FormulaKind::Equal:
      if (!termsMention(phi.terms(), var)) return phi;
      return Formula::equal(replaceTerm(phi.terms()[0], var, value), replaceTerm(phi.terms()[1], var, value));
    case FormulaKind::ActionEq:
      if (!termsMention(phi.terms(), var)) return phi;
      return Formula::actionIs(phi.symbol(), replaceTerms(phi.terms(), var, value));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (phi.symbol() == var) return phi;  // bound occurrence
      if (!occursFree(phi.body(), var)) return phi;
      std::string bound = phi.symbol();
      Formula body = phi.body();
      if (value.isVariable() && value.name() == bound) {
        std::string fresh = bound + "'";
        while (mentionsName(body, fresh) || fresh == value.name() || fresh == var) fresh += "'";
        body = substituteTermImpl(body, bound, Term::variable(fresh));
        bound = fresh;
      }
      body = substituteTermImpl(body, var, value);
      return phi.kind() == FormulaKind::Exists ? Formula::exists(bound, phi.sort(), std::move(body))
                                               : Formula::forall(bound, phi.sort(), std::move(body));
    }
    default: {
      std::vector<Formula> children;
      children.reserve(phi.arity());
      bool changed = false;
      for (std::size_t i = 0; i < phi.arity(); ++i) {
        children.push_back(substituteTermImpl(phi.child(i), var, value));
        changed = changed || !(children.back() == phi.child(i));
      }
      return changed ? rebuild(phi, std::move(children)) : phi;
    }
  }
}

Formula substituteSituationImpl(const Formula& phi, std::string_view var, const Situation& value) {
  if (phi.kind() == FormulaKind::Fluent) {
    if (!situationMentionsSituationVar(phi.situation(), var)) return phi;
    return Formula::fluent(phi.symbol(), phi.terms(), replaceSituationVar(phi.situation(), var, value));
  }
  if (phi.arity() == 0) return phi;
  std::vector<Formula> children;
  children.reserve(phi.arity());
  for (std::size_t i = 0; i < phi.arity(); ++i) children.push_back(substituteSituationImpl(phi.child(i), var, value));
  return rebuild(phi, std::move(children));
}

}  // namespace

// ---------------------------------------------------------------------------
// Substitution

Formula substitute(const Formula& phi, std::string_view var, const ObjectId& value) {
  if (mentionsSituationVar(phi, var))
    throw SubstitutionError("cannot substitute object " + value + " for situation variable " + std::string(var));
  return substituteTermImpl(phi, var, Term::constant(value));
}

Formula substitute(const Formula& phi, std::string_view var, const Situation& value) {
  if (occursFree(phi, var))
    throw SubstitutionError("cannot substitute a situation for object variable " + std::string(var));
  return substituteSituationImpl(phi, var, value);
}

Formula substituteTerm(const Formula& phi, std::string_view var, const Term& value) {
  return substituteTermImpl(phi, var, value);
}

Formula instantiate(const Formula& phi, std::span<const std::string> vars, std::span<const ObjectId> values) {
  if (vars.size() != values.size()) throw ModelError("instantiate: parameter/argument count mismatch");
  // Values are constants, so sequential substitution equals simultaneous substitution.
  Formula out = phi;
  for (std::size_t i = 0; i < vars.size(); ++i) out = substituteTermImpl(out, vars[i], Term::constant(values[i]));
  return out;
}

Formula bindAction(const Formula& phi, const Action& alpha) {
  if (phi.kind() == FormulaKind::ActionEq) {
    if (phi.symbol() != alpha.name || phi.terms().size() != alpha.args.size()) return Formula::bottom();
    std::vector<Formula> eqs;
    for (std::size_t i = 0; i < alpha.args.size(); ++i) eqs.push_back(Formula::equal(phi.terms()[i], alpha.args[i]));
    return Formula::conjunction(eqs);
  }
  if (phi.arity() == 0) return phi;
  std::vector<Formula> children;
  for (std::size_t i = 0; i < phi.arity(); ++i) children.push_back(bindAction(phi.child(i), alpha));
  return rebuild(phi, std::move(children));
}

Formula mapFluents(const Formula& phi, const std::function<Formula(const Formula&)>& fn) {
  if (phi.kind() == FormulaKind::Fluent) return fn(phi);
  if (phi.arity() == 0) return phi;
  std::vector<Formula> children;
  for (std::size_t i = 0; i < phi.arity(); ++i) children.push_back(mapFluents(phi.child(i), fn));
  return rebuild(phi, std::move(children));
}

std::set<std::string> freeObjectVariables(const Formula& phi) {
  std::set<std::string> bound, out;
  collectFree(phi, bound, out);
  return out;
}

std::set<std::string> situationVariables(const Formula& phi) {
  std::set<std::string> out;
  if (phi.kind() == FormulaKind::Fluent) collectSituationVars(phi.situation(), out);
  for (std::size_t i = 0; i < phi.arity(); ++i) {
    auto sub = situationVariables(phi.child(i));
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

bool occursFree(const Formula& phi, std::string_view var) {
  switch (phi.kind()) {
    case FormulaKind::Rigid:
    case FormulaKind::Equal:
    case FormulaKind::ActionEq: return termsMention(phi.terms(), var);
    case FormulaKind::Fluent:
      return termsMention(phi.terms(), var) || situationMentionsObjectVar(phi.situation(), var);
    case FormulaKind::Exists:
    case FormulaKind::Forall: return phi.symbol() != var && occursFree(phi.body(), var);
    default:
      for (std::size_t i = 0; i < phi.arity(); ++i)
        if (occursFree(phi.child(i), var)) return true;
      return false;
  }
}

bool isVariableFree(const Formula& phi) { return freeObjectVariables(phi).empty(); }

// ---------------------------------------------------------------------------
// Simplification

namespace {

void flatten(FormulaKind kind, const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    flatten(kind, f.child(0), out);
    flatten(kind, f.child(1), out);
  } else {
    out.push_back(f);
  }
}

Formula simplifyChain(FormulaKind kind, const Formula& phi, const SimplifyContext* ctx);

/// One-point rule: in `exists x . ... & x = t & ...` (or `forall x . ... | x != t | ...`)
/// the quantifier can be dropped by substituting t for x. Returns t.
std::optional<Term> onePointWitness(const Formula& body, const std::string& var, bool isExists) {
  auto witness = [&](const Formula& eq) -> std::optional<Term> {
    if (eq.kind() != FormulaKind::Equal) return std::nullopt;
    const Term& l = eq.terms()[0];
    const Term& r = eq.terms()[1];
    if (l.isVariable() && l.name() == var && !(r.isVariable() && r.name() == var)) return r;
    if (r.isVariable() && r.name() == var && !(l.isVariable() && l.name() == var)) return l;
    return std::nullopt;
  };
  std::vector<Formula> parts;
  if (isExists) {
    flatten(FormulaKind::And, body, parts);
    for (const auto& p : parts)
      if (auto t = witness(p)) return t;
  } else {
    flatten(FormulaKind::Or, body, parts);
    for (const auto& p : parts)
      if (p.kind() == FormulaKind::Not)
        if (auto t = witness(p.child(0))) return t;
    if (body.kind() == FormulaKind::Implies) {
      std::vector<Formula> guards;
      flatten(FormulaKind::And, body.child(0), guards);
      for (const auto& g : guards)
        if (auto t = witness(g)) return t;
    }
  }
  return std::nullopt;
}

Formula simplifyImpl(const Formula& phi, const SimplifyContext* ctx) {
  switch (phi.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Fluent:
    case FormulaKind::ActionEq: return phi;
    case FormulaKind::Rigid: {
      if (!ctx) return phi;
      std::vector<ObjectId> args;
      for (const auto& t : phi.terms()) {
        if (!t.isConstant()) return phi;
        args.push_back(t.name());
      }
      if (auto v = ctx->rigid(phi.symbol(), args)) return Formula::boolean(*v);
      return phi;
    }
    case FormulaKind::Equal: {
      const auto& l = phi.terms()[0];
      const auto& r = phi.terms()[1];
      if (l == r) return Formula::top();
      if (l.isConstant() && r.isConstant()) return Formula::boolean(l.name() == r.name());
      return phi;
    }
    case FormulaKind::Not: {
      Formula c = simplifyImpl(phi.child(0), ctx);
      if (c.kind() == FormulaKind::True) return Formula::bottom();
      if (c.kind() == FormulaKind::False) return Formula::top();
      if (c.kind() == FormulaKind::Not) return c.child(0);
      return c == phi.child(0) ? phi : Formula::negation(std::move(c));
    }
    case FormulaKind::And:
    case FormulaKind::Or: return simplifyChain(phi.kind(), phi, ctx);
    case FormulaKind::Implies: {
      Formula a = simplifyImpl(phi.child(0), ctx);
      Formula b = simplifyImpl(phi.child(1), ctx);
      if (a.kind() == FormulaKind::False || b.kind() == FormulaKind::True) return Formula::top();
      if (a.kind() == FormulaKind::True) return b;
      if (b.kind() == FormulaKind::False) return simplifyImpl(Formula::negation(a), ctx);
      if (a == b) return Formula::top();
      return Formula::implication(std::move(a), std::move(b));
    }
    case FormulaKind::Iff: {
      Formula a = simplifyImpl(phi.child(0), ctx);
      Formula b = simplifyImpl(phi.child(1), ctx);
      if (a.kind() == FormulaKind::True) return b;
      if (b.kind() == FormulaKind::True) return a;
      if (a.kind() == FormulaKind::False) return simplifyImpl(Formula::negation(b), ctx);
      if (b.kind() == FormulaKind::False) return simplifyImpl(Formula::negation(a), ctx);
      if (a == b) return Formula::top();
      return Formula::equivalence(std::move(a), std::move(b));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool isExists = phi.kind() == FormulaKind::Exists;
      Formula b = simplifyImpl(phi.body(), ctx);
      bool sizeKnown = false;
      std::size_t size = 0;
      if (ctx != nullptr)
        if (auto d = ctx->domainSize(phi.sort())) {
          sizeKnown = true;
          size = *d;
        }
      if (b.kind() == (isExists ? FormulaKind::False : FormulaKind::True)) return b;
      if (phi.sort() == kDefaultSort)
        if (auto t = onePointWitness(b, phi.symbol(), isExists))
          return simplifyImpl(substituteTerm(b, phi.symbol(), *t), ctx);
      if (b.isConstant()) {
        // exists x.true / forall x.false depend on whether the domain is empty.
        if (sizeKnown) return size > 0 ? b : Formula::boolean(!isExists);
      } else if (sizeKnown && size > 0 && !occursFree(b, phi.symbol())) {
        return b;
      }
      return isExists ? Formula::exists(phi.symbol(), phi.sort(), std::move(b))
                      : Formula::forall(phi.symbol(), phi.sort(), std::move(b));
    }
  }
  return phi;
}

Formula simplifyChain(FormulaKind kind, const Formula& phi, const SimplifyContext* ctx) {
  const bool isAnd = kind == FormulaKind::And;
  const FormulaKind absorbing = isAnd ? FormulaKind::False : FormulaKind::True;
  const FormulaKind neutral = isAnd ? FormulaKind::True : FormulaKind::False;
  std::vector<Formula> raw;
  flatten(kind, phi, raw);
  std::vector<Formula> parts;
  std::unordered_set<Formula> seen;
  for (const auto& r : raw) {
    Formula s = simplifyImpl(r, ctx);
    std::vector<Formula> sub;
    flatten(kind, s, sub);
    for (auto& p : sub) {
      if (p.kind() == absorbing) return p;
      if (p.kind() == neutral) continue;
      if (seen.insert(p).second) parts.push_back(std::move(p));
    }
  }
  return isAnd ? Formula::conjunction(parts) : Formula::disjunction(parts);
}

}  // namespace

Formula simplify(const Formula& phi, const SimplifyContext* context) { return simplifyImpl(phi, context); }

Formula expandQuantifiers(const Formula& phi, const DomainProvider& domains) {
  if (phi.isQuantifier()) {
    std::vector<Formula> parts;
    for (const auto& c : domains.domain(phi.sort()))
    {
      // Folding equalities right away prunes instances before nested quantifiers multiply them.
      Formula body = simplify(substituteTermImpl(phi.body(), phi.symbol(), Term::constant(c)));
      if (body.isConstant()) {
        parts.push_back(body);
        continue;
      }
      parts.push_back(expandQuantifiers(body, domains));
    }
    return phi.kind() == FormulaKind::Exists ? Formula::disjunction(parts) : Formula::conjunction(parts);
  }
  if (phi.arity() == 0) return phi;
  std::vector<Formula> children;
  for (std::size_t i = 0; i < phi.arity(); ++i) children.push_back(expandQuantifiers(phi.child(i), domains));
  return rebuild(phi, std::move(children));
}

}  // namespace robotval::logic
