#include <gtest/gtest.h>

#include <cmath>

#include "wsaw/enumerate.hpp"
#include "wsaw/srw.hpp"

using namespace wsaw;

namespace {

ModelParams params(int d, double lambda, double beta) { return ModelParams{d, lambda, beta}; }

}  // namespace

TEST(Enumerate, SingleSiteIsExactlyOne) {
  for (double lambda : {0.0, 0.5, 1.0}) {
    const auto p = params(2, lambda, 0.3);
    const Domain one = Domain::explicit_set(2, {Point{0, 0}});
    const Enclosure g = green(p, one, Point{0, 0}, Point{0, 0}, 10);
    EXPECT_EQ(g.lower, 1.0);
    EXPECT_EQ(g.upper, 1.0);
    EXPECT_TRUE(g.rigorous);
  }
}

TEST(Enumerate, TwoSiteFreeWalkContainsExactValue) {
  const auto p = params(2, 0.0, 0.25);
  const Domain two = Domain::explicit_set(2, {Point{0, 0}, Point{1, 0}});
  const Enclosure g = green(p, two, Point{0, 0}, Point{0, 0}, 20);
  EXPECT_TRUE(g.rigorous);
  EXPECT_TRUE(g.contains(16.0 / 15.0)) << g.lower << " " << g.upper;
  EXPECT_LT(g.width(), 1e-10);
  const Enclosure h = green(p, two, Point{0, 0}, Point{1, 0}, 20);
  EXPECT_TRUE(h.contains(4.0 / 15.0));
}

TEST(Enumerate, TwoSiteSelfAvoidingIsExact) {
  const auto p = params(2, 1.0, 0.25);
  const Domain two = Domain::explicit_set(2, {Point{0, 0}, Point{1, 0}});
  const Enclosure g = green(p, two, Point{0, 0}, Point{0, 0}, 10);
  EXPECT_EQ(g.lower, 1.0);
  EXPECT_EQ(g.upper, 1.0);
  const Enclosure h = green(p, two, Point{0, 0}, Point{1, 0}, 10);
  EXPECT_DOUBLE_EQ(h.lower, 0.25);
  EXPECT_LE(h.upper, 0.25 * (1 + 1e-14));
}

TEST(Enumerate, RowMatchesPointQueries) {
  const auto p = params(1, 0.5, 0.1);
  const Domain box = Domain::box(Point{0}, 1);
  Workspace ws;
  const GreenRow r = green_row(p, box, Point{0}, 12, &ws);
  for (int y = -1; y <= 1; ++y) {
    const Enclosure e = green(p, box, Point{0}, Point{y}, 12, &ws);
    EXPECT_EQ(e.lower, r.lower_at(Point{y}));
    EXPECT_EQ(e.upper, r.at(Point{y}).upper);
  }
  const Enclosure chi = chi_truncated(p, 12);
  EXPECT_LE(r.total_lower(), chi.lower);
}

TEST(Enumerate, PhiOfSingleSite) {
  for (int d = 1; d <= 3; ++d) {
    const auto p = params(d, 0.3, 0.05);
    const Enclosure f = phi(p, Domain::explicit_set(d, {Point(d)}), 6);
    EXPECT_EQ(f.lower, 2 * d * 0.05);
    EXPECT_EQ(f.upper, 2 * d * 0.05);
  }
}

TEST(Enumerate, PhiFreeWalkMatchesLinearSolve) {
  const int d = 2;
  const double beta = 0.1;
  const Domain box = Domain::box(Point(d), 1);
  const GreenMatrix g = green_exact(d, beta, box);
  double exact = 0.0;
  for (const auto& [y, z] : exit_edges(box, Domain::whole(d))) exact += g.at(Point(d), y) * beta;
  const Enclosure f = phi(params(d, 0.0, beta), box, 30);
  // the solve itself is accurate to a few ulps
  EXPECT_LE(f.lower, exact * (1 + 1e-13)) << f.lower << " " << exact;
  EXPECT_GE(f.upper, exact * (1 - 1e-13)) << f.upper << " " << exact;
  EXPECT_LT(f.width(), 1e-12);
}

TEST(Enumerate, ChiFreeWalkContainsGeometricSum) {
  const auto p = params(1, 0.0, 0.2);
  const Enclosure c = chi_truncated(p, 40);
  EXPECT_TRUE(c.contains(5.0 / 3.0)) << c.lower << " " << c.upper;
  EXPECT_EQ(chi_truncated(params(2, 0.5, 0.0), 5).lower, 1.0);
  EXPECT_EQ(chi_truncated(params(2, 0.5, 0.0), 5).upper, 1.0);
}

TEST(Enumerate, SelfAvoidingChiLowerBound) {
  for (int d = 1; d <= 3; ++d) {
    const double beta = 0.1;
    const Enclosure c = chi_truncated(params(d, 1.0, beta), 6);
    EXPECT_GE(c.lower, 1.0 + 2 * d * beta);
  }
}

TEST(Enumerate, BubbleAgainstLinearSolve) {
  EXPECT_EQ(bubble_truncated(params(2, 0.3, 0.0), 4, 2).lower, 1.0);
  EXPECT_EQ(bubble_truncated(params(2, 0.3, 0.0), 4, 2).upper, 1.0);

  const int d = 2;
  const double beta = 0.1;
  const GreenMatrix g = green_exact(d, beta, Domain::box(Point(d), 14));
  double oracle = 0.0;
  for (const Point& x : box_around(Point(d), 6).points()) oracle += std::pow(g.at(Point(d), x), 2);
  const BubbleBound b = bubble_truncated(params(d, 0.0, beta), 30, 6);
  EXPECT_NEAR(b.window_lower, oracle, 1e-9 * oracle);
  EXPECT_TRUE(b.rigorous);
  EXPECT_GE(b.upper, b.lower);
}

TEST(Enumerate, BubbleMonotoneInWindowAndCutoff) {
  const auto p = params(2, 0.5, 0.15);
  Workspace ws;
  double prev_window = 0.0;
  for (int r = 0; r <= 4; ++r) {
    const BubbleBound b = bubble_truncated(p, 10, r, &ws);
    EXPECT_GE(b.window_lower, prev_window);
    prev_window = b.window_lower;
  }
  double prev = 0.0;
  double prev_upper = kInf;
  for (int n = 4; n <= 10; n += 2) {
    const BubbleBound b = bubble_truncated(p, n, 3, &ws);
    EXPECT_GE(b.lower, prev);
    EXPECT_LE(b.upper, prev_upper * (1 + 1e-12));
    prev = b.lower;
    prev_upper = b.upper;
  }
}

class OracleEquivalence : public ::testing::TestWithParam<std::tuple<int, Kernel>> {};

TEST_P(OracleEquivalence, FreeWalkBoxes) {
  const auto [d, kernel] = GetParam();
  const double beta = 0.3 / (2 * d);
  const int radius = d == 3 ? 1 : 2;
  // the census enumerates every walk, so it gets shorter cutoffs than the DP
  const bool dp = kernel == Kernel::Auto;
  const int n = d == 1 ? 20 : d == 2 ? (dp ? 20 : 11) : (dp ? 14 : 8);
  const Domain box = Domain::box(Point(d), radius);
  const GreenMatrix g = green_exact(d, beta, box);
  Workspace ws(0, kernel);
  for (const Point& x : box.points()) {
    const GreenRow& r = ws.row(params(d, 0.0, beta), box, x, n);
    ASSERT_TRUE(r.rigorous);
    for (const Point& y : box.points()) {
      const Enclosure e = r.at(y);
      const double exact = g.at(x, y);
      EXPECT_LE(e.lower, exact * (1 + 1e-13)) << x.to_string() << " " << y.to_string();
      EXPECT_GE(e.upper, exact * (1 - 1e-13)) << x.to_string() << " " << y.to_string();
      EXPECT_LT(e.width(), dp ? 1e-6 : 1e-3);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, OracleEquivalence,
                         ::testing::Combine(::testing::Values(1, 2, 3),
                                            ::testing::Values(Kernel::Auto, Kernel::Census)));

TEST(Enumerate, FreeKernelAgreesWithCensusBitwise) {
  const auto p = params(2, 0.0, 0.12);
  const Domain box = Domain::box(Point(2), 2);
  Workspace dp(0, Kernel::Auto);
  Workspace census(0, Kernel::Census);
  for (const Point& x : {Point{0, 0}, Point{1, -2}, Point{2, 1}}) {
    const GreenRow& a = dp.row(p, box, x, 12);
    const GreenRow& b = census.row(p, box, x, 12);
    ASSERT_EQ(a.endpoints, b.endpoints);
    for (std::size_t i = 0; i < a.lower.size(); ++i) EXPECT_EQ(a.lower[i], b.lower[i]);
  }
}

TEST(Enumerate, MonotoneInBetaLambdaAndDomain) {
  const Point x{1, 1};
  const Domain small = Domain::box(Point(2), 1);
  const Domain big = Domain::box(Point(2), 2);
  Workspace ws;
  double prev = 0.0;
  for (double beta : {0.02, 0.05, 0.1, 0.15}) {
    const double g = green(params(2, 0.4, beta), big, Point(2), x, 10, &ws).lower;
    EXPECT_GT(g, prev);
    prev = g;
  }
  prev = kInf;
  for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double g = green(params(2, lambda, 0.15), big, Point(2), x, 10, &ws).lower;
    EXPECT_LT(g, prev);
    prev = g;
  }
  for (double lambda : {0.0, 0.5, 1.0}) {
    const auto p = params(2, lambda, 0.15);
    EXPECT_LE(green(p, small, Point(2), x, 10, &ws).lower, green(p, big, Point(2), x, 10, &ws).lower);
    EXPECT_LE(green(p, big, Point(2), x, 10, &ws).lower,
              green(p, Domain::whole(2), Point(2), x, 10, &ws).lower);
  }
}

TEST(Enumerate, ExactSymmetry) {
  const Domain box = Domain::box(Point(2), 2);
  for (double lambda : {0.0, 0.5, 1.0}) {
    const auto p = params(2, lambda, 0.1);
    Workspace ws(0, Kernel::Auto, false);
    const auto pts = box.points();
    for (const Point& x : pts) {
      for (const Point& y : pts) {
        EXPECT_EQ(green(p, box, x, y, 10, &ws).lower, green(p, box, y, x, 10, &ws).lower);
      }
    }
  }
}

TEST(Enumerate, SymmetryReductionIsExact) {
  const Domain box = Domain::box(Point(2), 2);
  const auto p = params(2, 0.5, 0.1);
  Workspace with(0, Kernel::Auto, true);
  Workspace without(0, Kernel::Auto, false);
  for (const Point& x : box.points()) {
    const GreenRow& a = with.row(p, box, x, 9);
    const GreenRow& b = without.row(p, box, x, 9);
    ASSERT_EQ(a.endpoints, b.endpoints);
    for (std::size_t i = 0; i < a.lower.size(); ++i) EXPECT_EQ(a.lower[i], b.lower[i]);
    EXPECT_EQ(a.slack, b.slack);
  }
}

TEST(Enumerate, ThreadCountIndependence) {
  const Domain box = Domain::box(Point(3), 1);
  for (double lambda : {0.0, 0.5}) {
    const auto p = params(3, lambda, 0.1);
    Workspace one(1);
    Workspace four(4);
    for (const Point& x : {Point{0, 0, 0}, Point{1, 0, -1}}) {
      const GreenRow& a = one.row(p, box, x, 10);
      const GreenRow& b = four.row(p, box, x, 10);
      EXPECT_EQ(a.endpoints, b.endpoints);
      EXPECT_EQ(a.lower, b.lower);
      EXPECT_EQ(a.slack, b.slack);
    }
  }
}

TEST(Enumerate, HalfSpaceWithinReachMatchesIntersection) {
  // Walks of length <= N from 0 never leave Lambda_N, so H_n and H_n cap
  // Lambda_N give identical truncated sums.
  const int n = 8;
  const auto p = params(2, 0.5, 0.1);
  const Domain h = Domain::half_space(2, 1);
  const Domain cut = Domain::intersection({h, Domain::box(Point(2), n)});
  const GreenRow a = green_row(p, h, Point(2), n);
  const GreenRow b = green_row(p, cut, Point(2), n);
  ASSERT_EQ(a.endpoints, b.endpoints);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.mass_at_n, b.mass_at_n);
}

TEST(Enumerate, NonRigorousAboveCountingThreshold) {
  const auto p = params(2, 0.0, 0.3);
  const Enclosure g = green(p, Domain::whole(2), Point(2), Point(2), 6);
  EXPECT_FALSE(g.rigorous);
  EXPECT_EQ(g.upper, kInf);
  EXPECT_GE(g.lower, 1.0);
  // (2d - lambda) beta < 1 restores a bound even though 2d beta > 1
  const Enclosure s = green(params(2, 1.0, 0.3), Domain::whole(2), Point(2), Point(2), 6);
  EXPECT_TRUE(s.rigorous);
  EXPECT_LT(s.upper, kInf);
}

TEST(Enumerate, TailSlackShrinksWithCutoff) {
  const auto p = params(2, 0.5, 0.1);
  double prev = kInf;
  Workspace ws;
  for (int n = 2; n <= 10; n += 2) {
    const Enclosure g = green(p, Domain::whole(2), Point(2), Point{1, 0}, n, &ws);
    EXPECT_LT(g.width(), prev);
    prev = g.width();
  }
}

TEST(Enumerate, ExitMassIsDifference) {
  const auto p = params(2, 0.5, 0.1);
  const Domain s = Domain::box(Point(2), 1);
  const Domain big = Domain::box(Point(2), 2);
  Workspace ws;
  const Point x{1, 0};
  const Enclosure d = exit_mass(p, s, big, x, 10, ws);
  const double diff = green(p, big, Point(2), x, 10, &ws).lower - green(p, s, Point(2), x, 10, &ws).lower;
  EXPECT_NEAR(d.lower, diff, 1e-15);
  EXPECT_GE(d.upper, d.lower);
  EXPECT_EQ(exit_mass(p, big, big, x, 10, ws).upper, 0.0);
}

TEST(Enumerate, RejectsBadInput) {
  const auto p = params(2, 0.5, 0.1);
  EXPECT_THROW(green(p, Domain::box(Point(2), 1), Point{3, 0}, Point(2), 4), Error);
  EXPECT_THROW(green(p, Domain::box(Point(2), 1), Point(2), Point{3, 0}, 4), Error);
  EXPECT_THROW(green(p, Domain::box(Point(3), 1), Point(3), Point(3), 4), Error);
  EXPECT_THROW(phi(p, Domain::positive_box(2, 2), 4), Error);
}
