#include "robotval/tasks/task.hpp"

#include <functional>

#include "robotval/errors.hpp"

namespace robotval::tasks {

using logic::TokenKind;

struct Task::Node {
  TaskKind kind = TaskKind::Nil;
  Action action;
  Formula formula;
  std::vector<Task> children;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) { return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)); }

std::size_t hashAction(const Action& a) {
  std::size_t h = std::hash<std::string>{}(a.name);
  for (const auto& t : a.args) h = mix(h, std::hash<std::string>{}(t.name()));
  return h;
}

}  // namespace

Task::Task() : Task(nil()) {}

Task Task::nil() {
  static const Task t(std::make_shared<const Node>(Node{TaskKind::Nil, {}, {}, {}, 1}));
  return t;
}

Task Task::op(Action a) {
  Node n;
  n.kind = TaskKind::Op;
  n.hash = mix(2, hashAction(a));
  n.action = std::move(a);
  return Task(std::make_shared<const Node>(std::move(n)));
}

Task Task::test(Formula phi) {
  Node n;
  n.kind = TaskKind::Test;
  n.hash = mix(3, phi.hash());
  n.formula = std::move(phi);
  return Task(std::make_shared<const Node>(std::move(n)));
}

Task Task::seq(Task first, Task second) {
  Node n;
  n.kind = TaskKind::Seq;
  n.hash = mix(mix(4, first.hash()), second.hash());
  n.children = {std::move(first), std::move(second)};
  return Task(std::make_shared<const Node>(std::move(n)));
}

Task Task::choice(Task first, Task second) {
  Node n;
  n.kind = TaskKind::Choice;
  n.hash = mix(mix(5, first.hash()), second.hash());
  n.children = {std::move(first), std::move(second)};
  return Task(std::make_shared<const Node>(std::move(n)));
}

Task Task::sequence(const std::vector<Task>& parts) {
  if (parts.empty()) return nil();
  Task out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = seq(parts[i], out);
  return out;
}

TaskKind Task::kind() const noexcept { return node_->kind; }

const Action& Task::action() const {
  if (kind() != TaskKind::Op) throw InternalError("task is not an operation");
  return node_->action;
}

const Formula& Task::formula() const {
  if (kind() != TaskKind::Test) throw InternalError("task is not a test");
  return node_->formula;
}

const Task& Task::first() const {
  if (node_->children.size() != 2) throw InternalError("task has no sub-tasks");
  return node_->children[0];
}

const Task& Task::second() const {
  if (node_->children.size() != 2) throw InternalError("task has no sub-tasks");
  return node_->children[1];
}

std::size_t Task::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

std::size_t Task::hash() const noexcept { return node_->hash; }

bool operator==(const Task& a, const Task& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TaskKind::Nil: return true;
    case TaskKind::Op: return a.action() == b.action();
    case TaskKind::Test: return a.formula() == b.formula();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

namespace {

Task parseItem(logic::Parser& p);

/// `[t1 ; t2 ; ...]` or `[t1 | t2 | ...]` after the opening bracket.
Task parseBracket(logic::Parser& p) {
  std::vector<Task> items{parseItem(p)};
  TokenKind sep = TokenKind::End;
  while (p.peek().kind == TokenKind::Semicolon || p.peek().kind == TokenKind::Or) {
    TokenKind k = p.peek().kind;
    if (sep != TokenKind::End && k != sep) p.fail("mixed ';' and '|' in one bracket; nest brackets instead");
    sep = k;
    p.accept(k);
    items.push_back(parseItem(p));
  }
  p.expect(TokenKind::RBracket, "']'");
  if (items.size() == 1) return items[0];
  Task out = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;)
    out = sep == TokenKind::Semicolon ? Task::seq(items[i], out) : Task::choice(items[i], out);
  return out;
}

Task parseItem(logic::Parser& p) {
  if (p.accept(TokenKind::LBracket)) return parseBracket(p);
  if (p.acceptKeyword("nil")) return Task::nil();
  if (p.acceptKeyword("if")) {
    Formula cond = p.formula();
    p.expectKeyword("then");
    Task yes = parseItem(p);
    p.expectKeyword("else");
    Task no = parseItem(p);
    return Task::choice(Task::seq(Task::test(cond), yes), Task::seq(Task::test(Formula::negation(cond)), no));
  }
  const auto& t = p.peek();
  if (t.kind == TokenKind::Identifier && p.vocabulary().operations.contains(t.text) &&
      p.peek(1).kind == TokenKind::LParen) {
    Action a = p.action();
    for (const auto& arg : a.args)
      if (!arg.isConstant()) throw GroundingError("operation " + a.name + " has unground argument " + arg.name());
    return Task::op(std::move(a));
  }
  Formula phi = p.formula();
  p.expect(TokenKind::Question, "'?' after test formula");
  if (!logic::isVariableFree(phi)) throw GroundingError("test formula has free object variables");
  for (const auto& v : logic::situationVariables(phi))
    if (v != logic::kSituationVariable) p.fail("test formulas may only use the situation variable s");
  return Task::test(std::move(phi));
}

std::string printAction(const Action& a) { return logic::print(a); }

}  // namespace

Task parseTask(logic::Parser& parser) { return parseItem(parser); }

Task parseTask(std::string_view text, const logic::Vocabulary& vocabulary) {
  logic::Parser p(text, vocabulary);
  Task t = parseItem(p);
  p.expectEnd();
  return t;
}

std::string print(const Task& t) {
  switch (t.kind()) {
    case TaskKind::Nil: return "nil";
    case TaskKind::Op: return printAction(t.action());
    case TaskKind::Test: {
      const Formula& f = t.formula();
      const bool bare = f.isAtom() || f.isConstant() || f.kind() == logic::FormulaKind::Not;
      return (bare ? logic::print(f) : "(" + logic::print(f) + ")") + "?";
    }
    case TaskKind::Seq:
    case TaskKind::Choice: {
      // Flatten right-nested chains of the same connective.
      const TaskKind k = t.kind();
      std::string out = "[" + print(t.first());
      const Task* rest = &t.second();
      while (rest->kind() == k) {
        out += (k == TaskKind::Seq ? " ; " : " | ") + print(rest->first());
        rest = &rest->second();
      }
      return out + (k == TaskKind::Seq ? " ; " : " | ") + print(*rest) + "]";
    }
  }
  return "";
}

bool isFinal(const Task& t) {
  switch (t.kind()) {
    case TaskKind::Nil: return true;
    case TaskKind::Seq: return isFinal(t.first()) && isFinal(t.second());
    case TaskKind::Choice: return isFinal(t.first()) || isFinal(t.second());
    default: return false;
  }
}

namespace {

void successors(const ActionTheory& theory, const ExecutionState& st, const Task& task,
                const std::function<void(ExecutionState)>& emit) {
  switch (task.kind()) {
    case TaskKind::Nil: return;
    case TaskKind::Op: {
      action::DerivedState ds = action::computeDerived(theory, st.world);
      if (!action::possible(theory, ds, task.action())) return;
      emit({Situation::doing(task.action(), st.situation), Task::nil(), action::progress(theory, ds, task.action())});
      return;
    }
    case TaskKind::Test: {
      action::DerivedState ds = action::computeDerived(theory, st.world);
      if (!action::holds(theory, ds, task.formula())) return;
      emit({st.situation, Task::nil(), st.world});
      return;
    }
    case TaskKind::Seq: {
      const Task& rest = task.second();
      successors(theory, st, task.first(), [&](ExecutionState next) {
        next.remaining = next.remaining.kind() == TaskKind::Nil ? rest : Task::seq(next.remaining, rest);
        emit(std::move(next));
      });
      if (isFinal(task.first())) successors(theory, st, rest, emit);
      return;
    }
    case TaskKind::Choice:
      successors(theory, st, task.first(), emit);
      successors(theory, st, task.second(), emit);
      return;
  }
}

void explore(const ActionTheory& theory, const ExecutionState& st, std::vector<Action>& trace,
             const std::function<bool(const std::vector<Action>&)>& onFinal, bool& stop) {
  if (stop) return;
  if (isFinal(st.remaining) && !onFinal(trace)) {
    stop = true;
    return;
  }
  for (auto& next : step(theory, st)) {
    const bool moved = !(next.situation == st.situation);
    if (moved) trace.push_back(next.situation.action());
    explore(theory, next, trace, onFinal, stop);
    if (moved) trace.pop_back();
    if (stop) return;
  }
}

}  // namespace

std::vector<ExecutionState> step(const ActionTheory& theory, const ExecutionState& state) {
  std::vector<ExecutionState> out;
  successors(theory, state, state.remaining, [&](ExecutionState next) { out.push_back(std::move(next)); });
  return out;
}

Outcome execute(const ActionTheory& theory, const WorldState& w0, const Task& tau) {
  bool found = false;
  std::vector<Action> trace;
  explore(theory, {Situation::initial(), tau, w0}, trace,
          [&](const std::vector<Action>&) {
            found = true;
            return false;
          },
          found);
  return found ? Outcome::Completes : Outcome::Stuck;
}

std::set<std::vector<Action>> completedTraces(const ActionTheory& theory, const WorldState& w0, const Task& tau) {
  std::set<std::vector<Action>> out;
  std::vector<Action> trace;
  bool stop = false;
  explore(theory, {Situation::initial(), tau, w0}, trace,
          [&](const std::vector<Action>& t) {
            out.insert(t);
            return true;
          },
          stop);
  return out;
}

std::vector<Task> flatten(const Task& branch) {
  std::vector<Task> out;
  std::function<void(const Task&)> walk = [&](const Task& t) {
    switch (t.kind()) {
      case TaskKind::Nil: return;
      case TaskKind::Op:
      case TaskKind::Test: out.push_back(t); return;
      case TaskKind::Seq:
        walk(t.first());
        walk(t.second());
        return;
      case TaskKind::Choice: throw InternalError("flatten expects a choice-free task");
    }
  };
  walk(branch);
  return out;
}

std::vector<Task> normalize(const Task& tau) {
  // Each branch is kept as its list of steps, then rebuilt as a right-nested sequence.
  std::function<std::vector<std::vector<Task>>(const Task&)> go = [&](const Task& t) -> std::vector<std::vector<Task>> {
    switch (t.kind()) {
      case TaskKind::Nil: return {{}};
      case TaskKind::Op:
      case TaskKind::Test: return {{t}};
      case TaskKind::Choice: {
        auto a = go(t.first());
        auto b = go(t.second());
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      case TaskKind::Seq: {
        auto a = go(t.first());
        auto b = go(t.second());
        std::vector<std::vector<Task>> out;
        for (const auto& x : a)
          for (const auto& y : b) {
            std::vector<Task> joined = x;
            joined.insert(joined.end(), y.begin(), y.end());
            out.push_back(std::move(joined));
          }
        return out;
      }
    }
    return {};
  };
  std::vector<Task> out;
  for (const auto& steps : go(tau)) out.push_back(Task::sequence(steps));
  return out;
}

std::vector<Action> operations(const Task& tau) {
  std::vector<Action> out;
  std::function<void(const Task&)> walk = [&](const Task& t) {
    if (t.kind() == TaskKind::Op) out.push_back(t.action());
    if (t.kind() == TaskKind::Seq || t.kind() == TaskKind::Choice) {
      walk(t.first());
      walk(t.second());
    }
  };
  walk(tau);
  return out;
}

}  // namespace robotval::tasks
