#include <gtest/gtest.h>

#include "oracles.hpp"
#include "robotval/errors.hpp"
#include "robotval/pipeline/pipeline.hpp"
#include "robotval/stl/synthesis.hpp"

using namespace robotval;

namespace {

const pipeline::Model& kitchen() {
  static const pipeline::Model m = pipeline::loadModel(oracle::modelPath("kitchen4.sc"));
  return m;
}

const stl::PredicateMap& pmap() {
  static const stl::PredicateMap p = stl::loadPredicateMap(oracle::modelPath("kitchen4.pmap").string());
  return p;
}

action::WorldState closedMicrowave() {
  std::vector<logic::GroundAtom> atoms{{"Loc", {"o_b", "o_p"}}, {"Loc", {"o_p", "o_t"}}, {"IsOpen", {"o_b"}},
                                       {"IsOpen", {"o_p"}}, {"IsOpen", {"o_t"}}};
  return action::worldFromAtoms(kitchen().theory(), atoms);
}

}  // namespace

TEST(PredicateMap, ParsesIntervalsAndDelta) {
  const auto& p = pmap();
  EXPECT_EQ(p.deltaT, 8);
  const auto* open = p.find("IsOpen");
  ASSERT_NE(open, nullptr);
  EXPECT_EQ(open->signal, "door");
  ASSERT_TRUE(open->whenFalse.has_value());
  EXPECT_TRUE(open->whenFalse->contains(0.5));
  EXPECT_FALSE(open->whenFalse->contains(1));
  EXPECT_EQ(open->whenFalse->at(0.5), 0.5);
  EXPECT_FALSE(open->whenTrue->contains(80));
  EXPECT_EQ(p.signalName("Loc", {"o_b", "o_m"}), "gap:o_b:o_m");
  EXPECT_EQ(p.predicate("Loc", {"o_b", "o_m"}).label(), "Loc(o_b,o_m)");
}

TEST(PredicateMap, Errors) {
  EXPECT_THROW(stl::parsePredicateMap("F(o) := s(o) > 1\n"), ParseError);
  try {
    stl::parsePredicateMap("deltat: 2\nF(o) := s(o) > 1\nG(o) := s(x) > 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(stl::parsePredicateMap("deltat: 2\nF(o) := s(o) > 1 ; true [3,2]\n"), ParseError);
  EXPECT_THROW(stl::parsePredicateMap("deltat: 2\nF(o) := s(o) > 1\nF(o) := s(o) < 1\n"), ParseError);
}

TEST(Chi, OneLiteralPerFluentInstance) {
  const auto& t = kitchen().theory();
  auto c = stl::chi(t, action::computeDerived(t, closedMicrowave()), pmap());
  ASSERT_EQ(c.kind(), stl::StlKind::And);
  EXPECT_EQ(c.children().size(), t.primitiveLayout().size() + t.derivedLayout().size());
  std::size_t positive = 0;
  for (const auto& lit : c.children()) positive += lit.kind() == stl::StlKind::Atom;
  // Two locations, three open objects, and In for those two locations plus the chain.
  EXPECT_EQ(positive, 2u + 3u + 3u);
}

TEST(Chi, UnmappedFamilyIsReported) {
  const auto& t = kitchen().theory();
  auto partial = stl::parsePredicateMap("deltat: 1\nLoc(o,o2) := gap(o,o2) <= 0.01\n");
  try {
    stl::chi(t, action::computeDerived(t, closedMicrowave()), partial);
    FAIL();
  } catch (const SynthesisError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("IsOpen"), std::string::npos);
    EXPECT_NE(msg.find("In"), std::string::npos);
  }
}

TEST(Synthesis, NestedEventuallyPerOperation) {
  const auto& m = kitchen();
  auto tau = tasks::parseTask("[open(o_m) ; put(o_b,o_m)]", m.theory().vocabulary());
  auto spec = stl::synthesize(m.theory(), closedMicrowave(), tau, pmap());
  ASSERT_EQ(spec.branches.size(), 1u);
  const auto& f = spec.formula;
  ASSERT_EQ(f.kind(), stl::StlKind::Eventually);
  EXPECT_EQ(f.upper(), 8);
  const auto& body = f.children()[0];
  ASSERT_EQ(body.kind(), stl::StlKind::And);
  EXPECT_EQ(body.children().back().kind(), stl::StlKind::Eventually);
  EXPECT_EQ(spec.branches[0].checkpoints.size(), 2u);
  EXPECT_EQ(stl::parseStl(stl::print(f)), f);
}

TEST(Synthesis, ConditionalKeepsTheTakenBranch) {
  const auto& m = kitchen();
  auto tau = tasks::parseTask("if IsOpen(o_m)@s then close(o_m) else open(o_m)", m.theory().vocabulary());
  auto spec = stl::synthesize(m.theory(), closedMicrowave(), tau, pmap(), 3.0);
  ASSERT_EQ(spec.branches.size(), 1u);
  EXPECT_EQ(logic::print(spec.branches[0].operations[0]), "open(o_m)");
  EXPECT_EQ(spec.deltaT, 3.0);
}

TEST(Synthesis, InaccessibleTaskIsAnInternalError) {
  const auto& m = kitchen();
  auto tau = tasks::parseTask("close(o_m)", m.theory().vocabulary());
  EXPECT_THROW(stl::synthesize(m.theory(), closedMicrowave(), tau, pmap()), InternalError);
}
