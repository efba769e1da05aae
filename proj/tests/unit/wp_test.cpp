#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "robotval/action/model_file.hpp"
#include "robotval/errors.hpp"
#include "robotval/logic/syntax.hpp"
#include "robotval/regression/wp.hpp"
#include "robotval/tasks/grammar.hpp"

using namespace robotval;

namespace {

struct Kitchen {
  action::ModelFile file = action::loadModel(oracle::modelPath("kitchen4.sc"));
  tasks::Grammar grammar = tasks::Grammar::fromText(file.grammar);
  logic::Vocabulary vocab = file.theory.vocabulary();
  std::vector<action::WorldState> worlds = action::enumerateInitialWorlds(file.theory);
};

const Kitchen& kitchen() {
  static const Kitchen k;
  return k;
}

logic::Formula wpOf(const char* task) {
  const auto& k = kitchen();
  return regression::wp(logic::Formula::top(), tasks::parseTask(task, k.vocab), k.file.theory).formula;
}

}  // namespace

TEST(Wp, OpenThenClose) {
  EXPECT_EQ(logic::print(wpOf("[open(o_m);close(o_m)]")), "!IsOpen(o_m)@s & !Running(o_m)@s");
}

TEST(Wp, DoubleOpenIsImpossible) { EXPECT_EQ(wpOf("[open(o_m);open(o_m)]"), logic::Formula::bottom()); }

TEST(Wp, NilIsTrue) { EXPECT_EQ(wpOf("nil"), logic::Formula::top()); }

TEST(Wp, SymbolicAndGroundAgree) {
  const auto& k = kitchen();
  for (const auto& d : tasks::enumerateDerivations(k.grammar, 5, k.vocab)) {
    auto g = regression::wp(logic::Formula::top(), d.task, k.file.theory, regression::WpMode::Ground).formula;
    auto s = regression::wp(logic::Formula::top(), d.task, k.file.theory, regression::WpMode::Symbolic).formula;
    for (const auto& w : k.worlds) {
      auto state = action::computeDerived(k.file.theory, w);
      ASSERT_EQ(action::holds(k.file.theory, state, g), action::holds(k.file.theory, state, s)) << tasks::print(d.task);
    }
  }
}

TEST(Wp, AgreesWithExecution) {
  const auto& k = kitchen();
  for (const auto& d : tasks::enumerateDerivations(k.grammar, 6, k.vocab)) {
    auto w = regression::wp(logic::Formula::top(), d.task, k.file.theory).formula;
    for (const auto& w0 : k.worlds)
      ASSERT_EQ(action::holds(k.file.theory, action::computeDerived(k.file.theory, w0), w),
                oracle::completes(k.file.theory, w0, d.task))
          << tasks::print(d.task) << " from " << action::describe(k.file.theory, w0);
  }
}

TEST(Wp, PostconditionIsEstablished) {
  const auto& k = kitchen();
  auto post = logic::parseFormula("In(o_b,o_m)@s & !IsOpen(o_m)@s", k.vocab);
  auto tau = tasks::parseTask("[put(o_b,o_m) ; close(o_m)]", k.vocab);
  auto w = regression::wp(post, tau, k.file.theory).formula;
  std::size_t satisfied = 0;
  for (const auto& w0 : k.worlds) {
    bool predicted = action::holds(k.file.theory, action::computeDerived(k.file.theory, w0), w);
    bool actual = false;
    for (const auto& end : oracle::runs(k.file.theory, w0, tau))
      actual = actual || action::holds(k.file.theory, action::computeDerived(k.file.theory, end), post);
    EXPECT_EQ(predicted, actual) << action::describe(k.file.theory, w0);
    satisfied += predicted;
  }
  EXPECT_GT(satisfied, 0u);
}

TEST(Regression, DualToProgression) {
  const auto& k = kitchen();
  const auto& t = k.file.theory;
  std::mt19937_64 rng(2024);
  const auto actions = t.groundActions();
  auto s = logic::Situation::variable("s");
  int checked = 0;
  while (checked < 200) {
    const auto& w = oracle::pick(rng, k.worlds);
    const auto& a = actions[rng() % actions.size()];
    if (!action::possible(t, w, a)) continue;
    auto phiNext = oracle::randomFluentFormula(rng, t, logic::Situation::doing(a, s), 3);
    auto phiHere = logic::mapFluents(phiNext, [&](const logic::Formula& f) {
      return logic::Formula::fluent(f.symbol(), f.terms(), s);
    });
    auto regressed = regression::regress(phiNext, t);
    bool before = action::holds(t, action::computeDerived(t, w), regressed);
    bool after = action::holds(t, action::computeDerived(t, action::progress(t, w, a)), phiHere);
    ASSERT_EQ(before, after) << logic::print(phiNext) << " in " << action::describe(t, w);
    ++checked;
  }
}

TEST(Regression, RejectsNestedSituations) {
  const auto& t = kitchen().file.theory;
  auto s = logic::Situation::variable("s");
  auto a = logic::groundAction("open", {"o_m"});
  auto deep = logic::Formula::fluent("IsOpen", {logic::Term::constant("o_m")},
                                     logic::Situation::doing(a, logic::Situation::doing(a, s)));
  EXPECT_THROW(regression::regress(deep, t), StructuralError);
}
