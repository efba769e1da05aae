#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "robotval/errors.hpp"
#include "robotval/stl/monitor.hpp"

using namespace robotval;
using stl::Comparator;
using stl::StlFormula;

namespace {

/// x: 1 3 -2 5 0 at t = 0..4; y: 0 0 1 1 1.
stl::Trace handTrace() {
  return stl::Trace({0, 1, 2, 3, 4}, {"x", "y"}, {{1, 3, -2, 5, 0}, {0, 0, 1, 1, 1}});
}

StlFormula x(Comparator c, double v) { return StlFormula::atom("x", c, v); }

}  // namespace

TEST(StlMonitor, HandComputedWindows) {
  auto tr = handTrace();
  EXPECT_NEAR(stl::robustness(StlFormula::eventually(1, 2, x(Comparator::Greater, 0)), tr).value, 3, 1e-9);
  EXPECT_NEAR(stl::robustness(StlFormula::always(0, 3, x(Comparator::Greater, 0)), tr).value, -2, 1e-9);
  EXPECT_NEAR(stl::robustness(StlFormula::always(0, 3, x(Comparator::Greater, 0)), tr, 1).value, -2, 1e-9);
  EXPECT_NEAR(stl::robustness(StlFormula::eventually(0, 1, x(Comparator::Less, 0)), tr, 1.5).value, 2, 1e-9);
  auto until = StlFormula::until(2, 3, x(Comparator::Greater, -3), x(Comparator::Greater, 4));
  EXPECT_NEAR(stl::robustness(until, tr).value, 1, 1e-9);
  // Between samples a signal holds its last value.
  EXPECT_NEAR(stl::robustness(x(Comparator::Greater, 0), tr, 2.5).value, -2, 1e-9);
  EXPECT_NEAR(stl::robustness(StlFormula::eventually(0.5, 0.5, x(Comparator::LessEq, 0)), tr).value, -1, 1e-9);
}

TEST(StlMonitor, TruncationIsFlagged) {
  auto tr = handTrace();
  auto r = stl::robustness(StlFormula::eventually(3, 6, x(Comparator::Greater, 0)), tr);
  EXPECT_TRUE(r.truncated);
  EXPECT_NEAR(r.value, 5, 1e-9);
  EXPECT_FALSE(stl::robustness(StlFormula::eventually(0, 4, x(Comparator::Greater, 0)), tr).truncated);
  EXPECT_THROW(stl::robustness(StlFormula::eventually(5, 6, x(Comparator::Greater, 0)), tr), TruncationError);
}

TEST(StlMonitor, UnknownSignal) {
  EXPECT_THROW(stl::robustness(StlFormula::atom("z", Comparator::Greater, 0), handTrace()), SpecError);
}

TEST(StlMonitor, ConstantsAreInfinite) {
  auto tr = handTrace();
  EXPECT_EQ(stl::robustness(StlFormula::top(), tr).value, std::numeric_limits<double>::infinity());
  EXPECT_EQ(stl::robustness(StlFormula::bottom(), tr).value, -std::numeric_limits<double>::infinity());
}

TEST(StlMonitor, MatchesReferenceRecursion) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> sigs{"u", "v"};
  for (int n = 0; n < 300; ++n) {
    auto phi = oracle::randomStl(rng, sigs, 3, 3);
    auto tr = oracle::randomTrace(rng, sigs, 0.5, 12);
    ASSERT_NEAR(stl::robustness(phi, tr).value, oracle::robustness(phi, tr, 0), 1e-12) << stl::print(phi);
    ASSERT_EQ(stl::satisfies(phi, tr).value, oracle::satisfied(phi, tr, 0)) << stl::print(phi);
  }
}

TEST(StlMonitor, SignOfRobustnessDecidesSatisfaction) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> sigs{"u", "v", "w"};
  for (int n = 0; n < 500; ++n) {
    auto phi = oracle::randomStl(rng, sigs, 4, 3);
    auto tr = oracle::randomTrace(rng, sigs, 0.25, 15);
    auto rho = stl::robustness(phi, tr);
    ASSERT_EQ(stl::satisfies(phi, tr).value, rho.value >= 0) << stl::print(phi) << " rho=" << rho.value;
  }
}

TEST(StlMonitor, AlwaysIsDualToEventually) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> sigs{"u", "v"};
  for (int n = 0; n < 200; ++n) {
    auto phi = oracle::randomStl(rng, sigs, 3, 3);
    auto tr = oracle::randomTrace(rng, sigs, 0.5, 12);
    double a = static_cast<double>(rng() % 3), b = a + static_cast<double>(rng() % 3);
    double lhs = stl::robustness(StlFormula::always(a, b, phi), tr).value;
    double rhs = -stl::robustness(StlFormula::eventually(a, b, StlFormula::negation(phi)), tr).value;
    ASSERT_EQ(lhs, rhs) << stl::print(phi);
  }
}

TEST(StlMonitor, WindowEndpointsSnapToSamples) {
  auto tr = stl::Trace({0, 0.1, 0.2, 0.30000000000000004}, {"x"}, {{0, 1, 2, 3}});
  bool truncated = false;
  auto pts = stl::windowPoints(tr, 0.1, 0.3, truncated);
  EXPECT_FALSE(truncated);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts.back(), tr.end());
}

TEST(StlFormula, PrintParseRoundTrip) {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 300; ++n) {
    auto phi = oracle::randomStl(rng, {"door:o_m", "gap:o_b:o_p"}, 4, 5);
    EXPECT_EQ(stl::parseStl(stl::print(phi)), phi) << stl::print(phi);
  }
  EXPECT_THROW(stl::parseStl("(F [2,1] (> x 0))"), SpecError);
  EXPECT_THROW(stl::parseStl("(F [0,1] (> x 0)"), ParseError);
  EXPECT_THROW(stl::parseStl("(> x zero)"), ParseError);
}

TEST(StlTrace, CsvRoundTrip) {
  std::mt19937_64 rng(31);
  auto tr = oracle::randomTrace(rng, {"a", "b:c"}, 0.05, 2);
  auto text = stl::toCsv(tr);
  EXPECT_EQ(stl::fromCsv(text), tr);
  EXPECT_EQ(stl::toCsv(stl::fromCsv(text)), text);
  EXPECT_THROW(stl::fromCsv("time,a\n0,1\n0,2\n"), Error);
  EXPECT_THROW(stl::fromCsv("time,a\n0,x\n"), ParseError);
}

TEST(StlTrace, RejectsMalformedInput) {
  EXPECT_THROW(stl::Trace({0, 1}, {"x"}, {{1}}), Error);
  EXPECT_THROW(stl::Trace({1, 0}, {"x"}, {{1, 2}}), Error);
  EXPECT_THROW(stl::Trace({0}, {"x", "x"}, {{1}, {2}}), Error);
}
