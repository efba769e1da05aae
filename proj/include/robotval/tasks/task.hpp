#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "robotval/action/theory.hpp"
#include "robotval/logic/formula.hpp"
#include "robotval/logic/syntax.hpp"

namespace robotval::tasks {

using action::ActionTheory;
using action::WorldState;
using logic::Action;
using logic::Formula;
using logic::Situation;

enum class TaskKind { Nil, Op, Test, Seq, Choice };

/// Immutable task term: nil | op | phi? | [t1 ; t2] | [t1 | t2].
class Task {
 public:
  Task();  ///< nil

  static Task nil();
  static Task op(Action a);
  static Task test(Formula phi);
  static Task seq(Task first, Task second);
  static Task choice(Task first, Task second);
  /// Right-nested sequence; empty gives nil.
  static Task sequence(const std::vector<Task>& parts);

  TaskKind kind() const noexcept;
  const Action& action() const;    ///< Op
  const Formula& formula() const;  ///< Test
  const Task& first() const;       ///< Seq, Choice
  const Task& second() const;      ///< Seq, Choice

  std::size_t size() const;  ///< number of nodes
  std::size_t hash() const noexcept;
  friend bool operator==(const Task& a, const Task& b);

 private:
  struct Node;
  explicit Task(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TaskHash {
  std::size_t operator()(const Task& t) const noexcept { return t.hash(); }
};

/// Task text: `nil`, `op(a,b)`, `phi?`, `[t1 ; t2 ; ...]`, `[t1 | t2 | ...]`
/// and `if phi then t1 else t2`, the latter read as `[[phi? ; t1] | [!phi? ; t2]]`.
/// Test formulas use the situation variable `s`.
Task parseTask(std::string_view text, const logic::Vocabulary& vocabulary);
Task parseTask(logic::Parser& parser);

std::string print(const Task& t);

/// The program is finished: nil, or compositions of nil (Golog's Final).
bool isFinal(const Task& t);

struct ExecutionState {
  Situation situation;
  Task remaining;
  WorldState world;
};

/// One-step transitions; Op steps require Poss, Test steps require the test to hold.
/// Stuck states and final states both have no successors; use isFinal to tell them apart.
std::vector<ExecutionState> step(const ActionTheory& theory, const ExecutionState& state);

enum class Outcome { Completes, Stuck };

/// Exhaustive search for a path to a final state.
Outcome execute(const ActionTheory& theory, const WorldState& w0, const Task& tau);

/// Operation sequences of every path that reaches a final state.
std::set<std::vector<Action>> completedTraces(const ActionTheory& theory, const WorldState& w0, const Task& tau);

/// Distributes sequencing over choice: the result lists Choice-free branches
/// (right-nested sequences of ops and tests, nil dropped).
std::vector<Task> normalize(const Task& tau);

/// Ops and tests of a Choice-free task in execution order.
std::vector<Task> flatten(const Task& branch);

/// Every operation instance appearing in the task.
std::vector<Action> operations(const Task& tau);

}  // namespace robotval::tasks
