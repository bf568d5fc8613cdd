#include <gtest/gtest.h>

#include "mixmax/bounds.hpp"
#include "mixmax/extremal.hpp"
#include "mixmax/transforms.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"

using namespace mixmax;
using mixmax::testing::brute_expected_max;
using mixmax::testing::dist;
using mixmax::testing::Generator;
using mixmax::testing::q;

TEST(ThetaSup, Examples) {
  EXPECT_EQ(theta_sup(1), 1);
  EXPECT_EQ(theta_sup(2), q("3/2"));
  EXPECT_EQ(theta_sup(10), q("19/10"));
  EXPECT_THROW(theta_sup(0), PreconditionError);
}

TEST(ExtremalAssembly, HalfSchedule) {
  auto result = build({{1, 1}, q("1/2"), std::vector<Rational>{q("1/2")}});
  EXPECT_EQ(result.assembly[0], dist({{"0", "1/2"}, {"4/3", "1/2"}}));
  EXPECT_EQ(result.assembly[1], FiniteDistribution::point_mass(1));
  EXPECT_EQ(result.theta, q("7/6"));
  EXPECT_EQ(result.gap, q("1/3"));
  EXPECT_EQ(result.rounds, 0u);
}

TEST(ExtremalAssembly, NearOneSchedule) {
  const Rational p = 1 - q("1/10000");
  auto result = build({{1, 1}, q("1/1000"), std::vector<Rational>{p}});
  const Rational x = 1 / (1 - p * p);
  EXPECT_EQ(result.assembly[0], FiniteDistribution({{0, p}, {x, 1 - p}}));
  const Rational e = expected_max(result.assembly);
  EXPECT_EQ(e, brute_expected_max({result.assembly[0], result.assembly[1]}));
  EXPECT_EQ(e, phi(1, 1, p, 2));
  EXPECT_LT(result.gap, q("1/1000"));
  EXPECT_LT(result.theta, q("3/2"));
}

TEST(ExtremalAssembly, GapShrinksWithDelta) {
  Rational previous = 1;
  for (const char* delta : {"1/10", "1/100", "1/1000"}) {
    auto a = extremal_assembly({1, 1}, staggered_schedule(2, q(delta)));
    auto g = gap(a);
    EXPECT_GT(g, 0);
    EXPECT_LT(g, previous);
    previous = g;
  }
}

TEST(ExtremalAssembly, ErrorPaths) {
  EXPECT_THROW(extremal_assembly({1, 1, 1}, {q("1/2"), q("1/2")}), PreconditionError);
  EXPECT_THROW(extremal_assembly({1, 1}, {q("1/2"), q("1/2")}), PreconditionError);
  EXPECT_THROW(extremal_assembly({1, 1}, {1}), PreconditionError);
  EXPECT_THROW(extremal_assembly({2, 1}, {q("1/2")}), PreconditionError);
  EXPECT_THROW(extremal_assembly({0, 1}, {q("1/2")}), PreconditionError);
  EXPECT_THROW(build({{1, 1}, 0, std::nullopt}), PreconditionError);
  EXPECT_THROW(build({{}, q("1/10"), std::nullopt}), PreconditionError);
}

TEST(ExtremalBuild, SingleMemberIsTrivial) {
  auto result = build({{q("5/2")}, q("1/10"), std::nullopt});
  EXPECT_EQ(result.assembly.size(), 1u);
  EXPECT_EQ(result.gap, 0);
  EXPECT_EQ(result.theta, 1);
}

TEST(ExtremalBuild, EqualTargetsApproachSupremum) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const Rational eps = q("1/100");
    auto result = build({std::vector<Rational>(n, 1), eps, std::nullopt});
    EXPECT_LE(result.gap, eps);
    EXPECT_GE(result.gap, 0);
    EXPECT_GE(result.theta, theta_sup(n) - eps);
    EXPECT_LT(result.theta, theta_sup(n));
    ASSERT_FALSE(result.gap_trace.empty());
    EXPECT_EQ(result.gap_trace.back(), result.gap);
  }
}

TEST(ExtremalBuild, RandomTargetsRealizeMeansExactly) {
  Generator gen(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = gen.uniform(2, 4);
    std::vector<Rational> m;
    for (std::size_t k = 0; k < n; ++k) m.push_back(make_rational(static_cast<long>(gen.uniform(1, 12)), gen.uniform(1, 4)));
    std::sort(m.begin(), m.end());
    const Rational eps = q("1/50");
    auto result = build({m, eps, std::nullopt});
    EXPECT_EQ(similar_max_means(result.assembly), m);
    EXPECT_LE(result.gap, eps);
    EXPECT_GE(result.gap, 0);
    auto report = full_report(result.assembly);
    EXPECT_TRUE(report.chain.all());
    for (std::size_t k = 1; k < result.gap_trace.size(); ++k) EXPECT_LT(result.gap_trace[k], result.gap_trace[k - 1]);
  }
}
