#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "wsaw/rng.hpp"
#include "wsaw/walk.hpp"

using namespace wsaw;
using Rational = boost::multiprecision::cpp_rational;

namespace {

Walk walk2(std::initializer_list<Point> pts) { return Walk(std::vector<Point>(pts)); }

Walk random_walk(std::mt19937_64& g, const Point& start, int len) {
  Walk w(start);
  const int d = start.dim();
  for (int i = 0; i < len; ++i) {
    const auto j = static_cast<int>(uniform_below(g, 2 * static_cast<std::uint64_t>(d)));
    w.push(w.back() + Point::unit(d, j / 2, j % 2 == 0 ? 1 : -1));
  }
  return w;
}

}  // namespace

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW((ModelParams{2, 0.5, 0.1}.validate()));
  EXPECT_THROW((ModelParams{0, 0.5, 0.1}.validate()), Error);
  EXPECT_THROW((ModelParams{2, 1.5, 0.1}.validate()), Error);
  EXPECT_THROW((ModelParams{2, 0.5, -0.1}.validate()), Error);
}

TEST(Walk, RhoExamples) {
  const Point o{0, 0}, e1{1, 0}, e2{0, 1};
  EXPECT_EQ(rho(walk2({o, e1, e1 + e2}), 0.7), 1.0);
  EXPECT_EQ(rho(walk2({o, e1, o}), 0.5), 0.5);
  EXPECT_EQ(rho(walk2({o, e1, o, e1}), 0.5), 0.25);
  EXPECT_EQ(rho(Walk(o), 0.9), 1.0);
}

TEST(Walk, ExtendFactorExamples) {
  const Point o{0, 0}, e1{1, 0};
  EXPECT_EQ(extend_factor(Walk(o), e1, 0.5), 1.0);
  EXPECT_EQ(extend_factor(walk2({o, e1}), o, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(extend_factor(walk2({o, e1, o}), e1, 0.3), 0.7);
  EXPECT_THROW(extend_factor(Walk(o), Point{2, 0}, 0.5), Error);
}

TEST(Walk, RejectsNonAdjacentSites) {
  EXPECT_THROW(Walk(std::vector<Point>{Point{0, 0}, Point{1, 1}}), Error);
  Walk w(Point{0, 0});
  EXPECT_THROW(w.push(Point{0, 2}), Error);
}

TEST(Walk, IncrementalConsistency) {
  std::mt19937_64 g(7);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 2;
    const double lam = 0.1 + 0.8 * (t % 9) / 8.0;
    Walk w{Point(d)};
    double prod = 1.0;
    Rational exact = 1;
    const Rational lam_q(lam);
    for (int i = 0; i < 14; ++i) {
      const auto j = static_cast<int>(uniform_below(g, 2 * static_cast<std::uint64_t>(d)));
      const Point next = w.back() + Point::unit(d, j / 2, j % 2 == 0 ? 1 : -1);
      prod *= extend_factor(w, next, lam);
      exact *= one_minus_lambda_pow(lam_q, w.occupancy(next));
      w.push(next);
    }
    EXPECT_NEAR(prod, rho(w, lam), 1e-12 * rho(w, lam));
    EXPECT_EQ(exact, rho<Rational>(w, lam_q));
  }
}

TEST(Walk, OccupancyMatchesSites) {
  std::mt19937_64 g(3);
  const Walk w = random_walk(g, Point(2), 30);
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < w.sites().size(); ++i) {
    int m = 0;
    for (const Point& p : w.sites()) m += p == w.sites()[i] ? 1 : 0;
    EXPECT_EQ(w.occupancy(w.sites()[i]), m);
    for (std::size_t j = i + 1; j < w.sites().size(); ++j) pairs += w.sites()[i] == w.sites()[j] ? 1 : 0;
  }
  EXPECT_EQ(w.coincidence_pairs(), pairs);
}

TEST(Walk, PopRestoresState) {
  std::mt19937_64 g(5);
  Walk w = random_walk(g, Point(2), 10);
  const Walk copy = w;
  w.push(w.back() + Point{1, 0});
  w.pop();
  EXPECT_EQ(w, copy);
  EXPECT_EQ(w.coincidence_pairs(), copy.coincidence_pairs());
}

TEST(Walk, RhoPropertiesOnRandomWalks) {
  std::mt19937_64 g(11);
  for (int t = 0; t < 300; ++t) {
    const Walk w = random_walk(g, Point(2 + t % 2), 1 + t % 15);
    EXPECT_EQ(rho(w, 0.4), rho(w.reversed(), 0.4));
    EXPECT_GE(rho(w, 0.3), rho(w, 0.6));
    EXPECT_EQ(rho(w, 0.0), 1.0);
    if (w.coincidence_pairs() == 0) EXPECT_EQ(rho(w, 1.0), 1.0);
  }
}

TEST(SplitWeightBounds, Examples) {
  const Point o{0, 0}, e1{1, 0}, e2{0, 1};
  // disjoint supports: equality at the upper bound
  const auto b1 = split_weight_bounds(walk2({o, e1}), walk2({e1 + e2, e2}), 0.4);
  EXPECT_EQ(b1.lower, b1.upper);
  EXPECT_EQ(rho(walk2({o, e1}).concatenated(walk2({e1 + e2, e2})), 0.4), b1.upper);
  // w2 returns to e1: one cross coincidence
  const Walk w1 = walk2({o, e1}), w2 = walk2({Point{2, 0}, e1});
  const auto b2 = split_weight_bounds(w1, w2, 0.5);
  EXPECT_EQ(cross_coincidences(w1, w2), 1);
  EXPECT_EQ(b2.lower, 0.5);
  EXPECT_EQ(b2.upper, 1.0);
  EXPECT_EQ(rho(w1.concatenated(w2), 0.5), 0.5);
  // lambda = 0: all three agree
  const auto b3 = split_weight_bounds(w1, w2, 0.0);
  EXPECT_EQ(b3.lower, 1.0);
  EXPECT_EQ(b3.upper, 1.0);
  EXPECT_THROW(split_weight_bounds(w1, walk2({Point{3, 0}}), 0.5), Error);
}

TEST(SplitWeightBounds, StartOfSecondWalkCounts) {
  // w2's first site lies on w1: the j = 0 term is needed for the lower bound
  const Point o{0, 0}, e1{1, 0};
  const Walk w1 = walk2({o, e1}), w2 = Walk(o);
  const auto b = split_weight_bounds(w1, w2, 0.5);
  EXPECT_LE(b.lower, rho(w1.concatenated(w2), 0.5));
}

TEST(SplitWeightBounds, ExactSandwichOnRandomTriples) {
  std::mt19937_64 g(2024);
  for (int t = 0; t < 1500; ++t) {
    const int d = 2 + t % 2;
    const Rational lam(std::vector<double>{0.3, 0.7, 1.0}[static_cast<std::size_t>(t % 3)]);
    const Walk w1 = random_walk(g, Point(d), static_cast<int>(uniform_below(g, 13)));
    const auto j = static_cast<int>(uniform_below(g, 2 * static_cast<std::uint64_t>(d)));
    const Walk w2 = random_walk(g, w1.back() + Point::unit(d, j / 2, j % 2 ? -1 : 1), static_cast<int>(uniform_below(g, 13)));
    const auto b = split_weight_bounds<Rational>(w1, w2, lam);
    const Rational r = rho<Rational>(w1.concatenated(w2), lam);
    EXPECT_LE(b.lower, r);
    EXPECT_LE(r, b.upper);
  }
}

TEST(Walk, JsonRoundTrip) {
  const Walk w = walk2({Point{0, 0}, Point{1, 0}, Point{1, 1}});
  EXPECT_EQ(walk_to_json(w), "[[0,0],[1,0],[1,1]]");
  EXPECT_EQ(walk_from_json(walk_to_json(w)), w);
  EXPECT_THROW(walk_from_json("[[0,0],[2,0]]"), Error);
}
