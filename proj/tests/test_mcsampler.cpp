#include <gtest/gtest.h>

#include <cmath>

#include "wsaw/enumerate.hpp"
#include "wsaw/mcsampler.hpp"

using namespace wsaw;

namespace {

// exact length-n contribution from a census
double exact_length_term(const WalkCensus& c, const Point& y, int n, const ModelParams& p) {
  double s = 0.0;
  for (int k = 0; k <= max_pairs(n); ++k) {
    s += static_cast<double>(c.count(y, n, k)) * std::pow(p.beta, n) * std::pow(1.0 - p.lambda, k);
  }
  return s;
}

}  // namespace

TEST(Mc, ZeroLengthIsExact) {
  const ModelParams p{2, 0.5, 0.1};
  for (McStrategy s : {McStrategy::Uniform, McStrategy::Nonreversing}) {
    const McEstimate e = estimate_green_mc(p, Domain::box(Point(2), 2), Point{1, 0}, Point{1, 0}, 0, 50,
                                           RandomSource{1}, s);
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
  }
}

TEST(Mc, AgreesWithEnumeration) {
  const ModelParams p{2, 0.5, 0.1};
  const Domain box = Domain::box(Point(2), 3);
  const double exact = green(p, box, Point(2), Point{1, 0}, 10).lower;
  for (McStrategy s : {McStrategy::Uniform, McStrategy::Nonreversing}) {
    const McEstimate e = estimate_green_mc(p, box, Point(2), Point{1, 0}, 10, 100000, RandomSource{2024}, s);
    EXPECT_GT(e.std_error, 0.0);
    EXPECT_NEAR(e.mean, exact, 3 * e.std_error) << to_string(s);
  }
}

TEST(Mc, StrategiesAgree) {
  const ModelParams p{2, 0.8, 0.15};
  const Domain box = Domain::box(Point(2), 2);
  const McEstimate a = estimate_green_mc(p, box, Point(2), Point{1, 1}, 8, 50000, RandomSource{5}, McStrategy::Uniform);
  const McEstimate b =
      estimate_green_mc(p, box, Point(2), Point{1, 1}, 8, 50000, RandomSource{6}, McStrategy::Nonreversing);
  EXPECT_NEAR(a.mean, b.mean, 3 * std::hypot(a.std_error, b.std_error));
}

TEST(Mc, PerLengthUnbiased) {
  Workspace ws;
  for (double lambda : {0.3, 1.0}) {
    const ModelParams p{2, lambda, 0.2};
    const Domain box = Domain::box(Point(2), 2);
    const Point y{1, 1};
    const WalkCensus& c = ws.census(p, box, Point(2), 8);
    for (McStrategy s : {McStrategy::Uniform, McStrategy::Nonreversing}) {
      const McEstimate e = estimate_green_mc(p, box, Point(2), y, 8, 40000, RandomSource{7}, s);
      ASSERT_EQ(e.per_length.size(), 9u);
      for (const McLength& l : e.per_length) {
        const double exact = exact_length_term(c, y, l.n, p);
        // 4 sigma per length over 18 comparisons, plus exact zeros
        EXPECT_NEAR(l.contribution, exact, 4 * l.std_error + 1e-15) << lambda << " " << to_string(s) << " " << l.n;
      }
    }
  }
}

TEST(Mc, SeedDeterminismAndThreadIndependence) {
  const ModelParams p{2, 0.5, 0.1};
  const Domain box = Domain::box(Point(2), 3);
  const McEstimate a = estimate_green_mc(p, box, Point(2), Point{2, 0}, 6, 5000, RandomSource{9}, McStrategy::Uniform, 1);
  const McEstimate b = estimate_green_mc(p, box, Point(2), Point{2, 0}, 6, 5000, RandomSource{9}, McStrategy::Uniform, 3);
  const McEstimate c = estimate_green_mc(p, box, Point(2), Point{2, 0}, 6, 5000, RandomSource{10}, McStrategy::Uniform, 1);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.mean, c.mean);
}

TEST(Mc, StrategyNames) {
  EXPECT_EQ(parse_strategy("uniform"), McStrategy::Uniform);
  EXPECT_EQ(parse_strategy("nonreversing"), McStrategy::Nonreversing);
  EXPECT_EQ(to_string(McStrategy::Nonreversing), "nonreversing");
  EXPECT_THROW(parse_strategy("pivot"), Error);
}

TEST(Mc, RejectsBadInput) {
  const ModelParams p{2, 0.5, 0.1};
  const Domain box = Domain::box(Point(2), 1);
  EXPECT_THROW(estimate_green_mc(p, box, Point(2), Point{3, 0}, 4, 10, RandomSource{1}), Error);
  EXPECT_THROW(estimate_green_mc(p, box, Point(2), Point{1, 0}, -1, 10, RandomSource{1}), Error);
  EXPECT_THROW(estimate_green_mc(p, box, Point(2), Point{1, 0}, 4, 0, RandomSource{1}), Error);
}

TEST(Rng, SubstreamsAreReproducible) {
  const RandomSource r{123};
  auto a = r.substream(4);
  auto b = r.substream(4);
  auto c = r.substream(5);
  EXPECT_EQ(a(), b());
  EXPECT_NE(r.substream(4)(), c());
  auto g = r.substream(0);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(uniform_below(g, 7), 7u);
    const double u = uniform01(g);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
