#include <gtest/gtest.h>

#include <random>

#include "robotval/errors.hpp"
#include "robotval/logic/syntax.hpp"
#include "robotval/logic/world.hpp"

using namespace robotval;
using logic::Formula;
using logic::FormulaKind;

namespace {

logic::Vocabulary vocab() {
  logic::Vocabulary v;
  v.objects = {"a", "b", "c"};
  v.rigid = {{"P", 1}, {"R", 2}};
  v.fluents = {{"F", 1}, {"G", 2}};
  v.operations = {{"put", 2}};
  return v;
}

std::map<std::string, std::vector<logic::ObjectId>> sorts() { return {{"obj", {"a", "b", "c"}}}; }

/// Truth by structural recursion over ground, quantifier-free formulas.
bool truth(const Formula& f, const std::map<std::string, bool>& atoms) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Rigid:
    case FormulaKind::Fluent: {
      std::string key = f.symbol();
      for (const auto& t : f.terms()) key += "," + t.name();
      return atoms.at(key);
    }
    case FormulaKind::Equal: return f.terms()[0].name() == f.terms()[1].name();
    case FormulaKind::Not: return !truth(f.child(0), atoms);
    case FormulaKind::And: return truth(f.child(0), atoms) && truth(f.child(1), atoms);
    case FormulaKind::Or: return truth(f.child(0), atoms) || truth(f.child(1), atoms);
    case FormulaKind::Implies: return !truth(f.child(0), atoms) || truth(f.child(1), atoms);
    case FormulaKind::Iff: return truth(f.child(0), atoms) == truth(f.child(1), atoms);
    default: throw std::logic_error("unexpected formula kind");
  }
}

Formula randomFormula(std::mt19937_64& rng, int depth) {
  static const char* objs[] = {"a", "b", "c"};
  auto c = [&] { return logic::Term::constant(objs[rng() % 3]); };
  if (depth == 0 || rng() % 5 == 0) {
    switch (rng() % 4) {
      case 0: return Formula::rigid("P", {c()});
      case 1: return Formula::fluent("F", {c()}, logic::Situation::initial());
      case 2: return Formula::equal(c(), c());
      default: return Formula::boolean(rng() % 2);
    }
  }
  Formula a = randomFormula(rng, depth - 1);
  switch (rng() % 5) {
    case 0: return Formula::negation(a);
    case 1: return Formula::conjunction(a, randomFormula(rng, depth - 1));
    case 2: return Formula::disjunction(a, randomFormula(rng, depth - 1));
    case 3: return Formula::implication(a, randomFormula(rng, depth - 1));
    default: return Formula::equivalence(a, randomFormula(rng, depth - 1));
  }
}

logic::World worldFromBits(unsigned bits) {
  logic::World w(sorts());
  const char* objs[] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    w.setRigid({"P", {objs[i]}}, (bits >> i) & 1);
    w.setFluent({"F", {objs[i]}}, logic::Situation::initial(), (bits >> (3 + i)) & 1);
  }
  return w;
}

std::map<std::string, bool> atomsFromBits(unsigned bits) {
  std::map<std::string, bool> m;
  const char* objs[] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    m[std::string("P,") + objs[i]] = (bits >> i) & 1;
    m[std::string("F,") + objs[i]] = (bits >> (3 + i)) & 1;
  }
  return m;
}

}  // namespace

TEST(Logic, EvaluateMatchesTruthTables) {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 200; ++n) {
    Formula f = randomFormula(rng, 4);
    for (unsigned bits = 0; bits < 64; ++bits)
      ASSERT_EQ(logic::evaluate(worldFromBits(bits), f), truth(f, atomsFromBits(bits))) << logic::print(f);
  }
}

TEST(Logic, SimplifyPreservesTruth) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    Formula f = randomFormula(rng, 4);
    Formula g = logic::simplify(f);
    EXPECT_LE(g.size(), f.size());
    for (unsigned bits = 0; bits < 64; ++bits)
      ASSERT_EQ(truth(f, atomsFromBits(bits)), truth(g, atomsFromBits(bits))) << logic::print(f) << " vs " << logic::print(g);
  }
}

TEST(Logic, PrintParseRoundTrip) {
  std::mt19937_64 rng(3);
  auto v = vocab();
  for (int n = 0; n < 200; ++n) {
    Formula f = randomFormula(rng, 4);
    EXPECT_EQ(logic::parseFormula(logic::print(f), v), f) << logic::print(f);
  }
  for (const char* text : {"forall x . P(x) -> exists y . R(x,y)", "!(F(a)@s0 & G(a,b)@do(put(a,b),s))", "a != b"}) {
    Formula f = logic::parseFormula(text, v);
    EXPECT_EQ(logic::parseFormula(logic::print(f), v), f) << text;
  }
}

TEST(Logic, QuantifierExpansionAgreesWithEvaluation) {
  auto v = vocab();
  logic::World w(sorts());
  const char* objs[] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    w.setRigid({"P", {objs[i]}}, i != 1);
    for (int j = 0; j < 3; ++j) w.setRigid({"R", {objs[i], objs[j]}}, i < j);
  }
  for (const char* text : {"forall x . P(x)", "exists x . P(x) & !R(x,x)", "forall x . exists y . R(x,y) | x = c",
                           "exists x . forall y . R(x,y) | x = y"}) {
    Formula f = logic::parseFormula(text, v);
    Formula g = logic::expandQuantifiers(f, w);
    EXPECT_EQ(logic::evaluate(w, f), logic::evaluate(w, g)) << text;
    EXPECT_TRUE(logic::isVariableFree(g));
  }
}

TEST(Logic, SubstitutionAvoidsCapture) {
  auto v = vocab();
  std::vector<std::string> bound{"y"};
  Formula f = logic::parseFormula("exists x . R(x,y)", v, bound);
  Formula g = logic::substituteTerm(f, "y", logic::Term::variable("x"));
  EXPECT_TRUE(logic::occursFree(g, "x"));
  EXPECT_FALSE(logic::occursFree(g, "y"));
}

TEST(Logic, ParseErrorsCarryPosition) {
  auto v = vocab();
  EXPECT_THROW(logic::parseFormula("P(a", v), ParseError);
  EXPECT_THROW(logic::parseFormula("Q(a)", v), Error);
  EXPECT_THROW(logic::parseFormula("P(a,b)", v), Error);
}

TEST(Logic, EvaluateRejectsFreeVariables) {
  auto v = vocab();
  std::vector<std::string> bound{"x"};
  Formula f = logic::parseFormula("P(x)", v, bound);
  EXPECT_THROW(logic::evaluate(worldFromBits(0), f), ModelError);
}
