#include <gtest/gtest.h>

#include <cmath>

#include "wsaw/observables.hpp"

using namespace wsaw;

TEST(SharpLength, SmallBetaIsOne) {
  const ModelParams p{2, 0.5, 0.01};
  const SharpLengthResult r = sharp_length(p, 4, 10);
  EXPECT_EQ(r.status, SharpLengthResult::Status::Found);
  EXPECT_EQ(r.value, 1);
  EXPECT_DOUBLE_EQ(r.threshold, std::exp(-2.0));
  ASSERT_EQ(r.phi_trace.size(), 1u);
  EXPECT_LE(r.phi_trace[0].second.upper, std::exp(-2.0));
}

TEST(SharpLength, EpsilonFormIsIdentical) {
  Workspace ws;
  for (double beta : {0.02, 0.08, 0.12, 0.16}) {
    const ModelParams p{2, 0.5, beta};
    const SharpLengthResult a = sharp_length(p, 3, 10, &ws);
    const SharpLengthResult b = sharp_length_eps(p, 1.0 - std::exp(-2.0), 3, 10, &ws);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.threshold, b.threshold);
    ASSERT_EQ(a.phi_trace.size(), b.phi_trace.size());
    for (std::size_t i = 0; i < a.phi_trace.size(); ++i) {
      EXPECT_EQ(a.phi_trace[i].second.lower, b.phi_trace[i].second.lower);
      EXPECT_EQ(a.phi_trace[i].second.upper, b.phi_trace[i].second.upper);
    }
  }
}

TEST(SharpLength, MonotoneInBetaAndEpsilon) {
  Workspace ws;
  int prev = 0;
  for (double beta = 0.02; beta <= 0.2001; beta += 0.03) {
    const ModelParams p{2, 0.5, beta};
    const SharpLengthResult r = sharp_length(p, 3, 10, &ws);
    if (!r.decided()) continue;
    EXPECT_GE(r.value, prev) << beta;
    prev = r.value;
    const SharpLengthResult e = sharp_length_eps(p, 0.5, 3, 10, &ws);
    if (e.decided()) EXPECT_LE(e.value, r.value);
  }
}

TEST(SharpLength, TinyThresholdExceedsKmax) {
  const SharpLengthResult r = sharp_length_eps(ModelParams{2, 0.5, 0.1}, 0.999, 2, 8);
  EXPECT_EQ(r.status, SharpLengthResult::Status::ExceedsKmax);
  EXPECT_EQ(r.phi_trace.size(), 2u);
  EXPECT_THROW(sharp_length_eps(ModelParams{2, 0.5, 0.1}, 1.0, 2, 8), Error);
  EXPECT_THROW(sharp_length(ModelParams{2, 0.5, 0.1}, 0, 8), Error);
}

TEST(CorrelationLength, OneDimensionalOracle) {
  const double beta = 0.2;
  const double r = (1.0 - std::sqrt(1.0 - 4.0 * beta * beta)) / (2.0 * beta);
  const XiFit fit = correlation_length_estimate(ModelParams{1, 0.0, beta}, {2, 4, 6, 8, 10}, 40);
  EXPECT_NEAR(fit.slope, -std::log(r), 0.05 * -std::log(r));
  EXPECT_GT(fit.slope, 0.0);
  EXPECT_NEAR(fit.xi, 1.0 / fit.slope, 1e-12);
  EXPECT_EQ(fit.residuals.size(), 5u);
}

TEST(CorrelationLength, LongerCutoffDoesNotShrinkXi) {
  Workspace ws;
  const ModelParams p{2, 0.0, 0.2};
  const XiFit a = correlation_length_estimate(p, {2, 4, 6, 8}, 16, &ws);
  const XiFit b = correlation_length_estimate(p, {2, 4, 6, 8}, 32, &ws);
  EXPECT_GE(b.xi, a.xi);
  EXPECT_THROW(correlation_length_estimate(p, {2, 20}, 16, &ws), Error);
  EXPECT_THROW(correlation_length_estimate(p, {4}, 16, &ws), Error);
}

TEST(ErrorAmplitude, VanishesAtBetaZero) {
  Workspace ws;
  const ErrorAmplitudeResult r =
      error_amplitude(ModelParams{2, 0.5, 0.0}, Domain::box(Point(2), 1), Domain::box(Point(2), 2), 6, ws);
  EXPECT_EQ(r.total.lower, 0.0);
  EXPECT_EQ(r.total.upper, 0.0);
}

TEST(ErrorAmplitude, SingleSiteFormula) {
  Workspace ws;
  const ModelParams p{2, 0.5, 0.1};
  const Domain s = Domain::explicit_set(2, {Point{0, 0}});
  const Domain big = Domain::box(Point(2), 2);
  const ErrorAmplitudeResult r = error_amplitude(p, s, big, 10, ws);
  ASSERT_EQ(r.per_u.size(), 1u);
  EXPECT_EQ(r.per_u[0].first, Point(2));
  double lo = 0.0, hi = 0.0;
  for (const Point& z : neighbors(Point(2))) {
    const Enclosure g = green(p, big, z, Point(2), 10, &ws);
    lo += p.beta * g.lower;
    hi += p.beta * g.upper;
  }
  const Enclosure e = r.per_u[0].second;
  EXPECT_NEAR(e.lower, lo, 1e-15);
  EXPECT_LE(e.lower, e.upper);
  // the formula's enclosure and ours overlap
  EXPECT_LE(e.lower, hi);
  EXPECT_LE(lo, e.upper);
}

TEST(ErrorAmplitude, TotalIsSumOfParts) {
  Workspace ws;
  const ModelParams p{2, 0.5, 0.1};
  const ErrorAmplitudeResult r = error_amplitude(p, Domain::box(Point(2), 1), Domain::box(Point(2), 2), 8, ws);
  double lo = 0.0, hi = 0.0;
  for (const auto& [u, e] : r.per_u) {
    lo += e.lower;
    hi += e.upper;
  }
  EXPECT_NEAR(r.total.lower, lo, 1e-15);
  EXPECT_NEAR(r.total.upper, hi + r.remainder.upper, 1e-15);
  EXPECT_EQ(r.per_u.size(), 9u);
}

TEST(ErrorAmplitude, NondecreasingInBeta) {
  Workspace ws;
  double prev = 0.0;
  for (double beta : {0.02, 0.05, 0.1, 0.15}) {
    const ErrorAmplitudeResult r =
        error_amplitude(ModelParams{2, 0.5, beta}, Domain::box(Point(2), 1), Domain::box(Point(2), 2), 8, ws);
    EXPECT_GE(r.total.lower, prev);
    prev = r.total.lower;
  }
}

TEST(FaceSet, SizeMatchesBruteForce) {
  for (int d : {2, 3}) {
    for (int n = 1; n <= 4; ++n) {
      std::size_t count = 0;
      for (const Point& x : box_around(Point(d), n).points()) count += (x[0] == n && x.sup_norm() == n) ? 1 : 0;
      const auto face = face_set(d, n);
      EXPECT_EQ(face.size(), count);
      EXPECT_EQ(face.size(), static_cast<std::size_t>(std::pow(2 * n + 1, d - 1)));
    }
  }
  const auto a1 = face_set(2, 1);
  EXPECT_EQ(a1, (std::vector<Point>{Point{1, -1}, Point{1, 0}, Point{1, 1}}));
}

TEST(AvgLower, BetaZeroIsVacuous) {
  const AvgLowerReport r = halfspace_avg_lower_check(ModelParams{2, 0.5, 0.0}, 1, 0.5, 8);
  EXPECT_EQ(r.avg_halfspace.lower, 0.0);
  EXPECT_EQ(r.precondition, Verdict::Fails);
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.verdict, Verdict::Holds);
  EXPECT_NE(r.note.find("precondition"), std::string::npos);
}

TEST(AvgLower, ExampleInstance) {
  const AvgLowerReport r = halfspace_avg_lower_check(ModelParams{2, 0.5, 0.2}, 1, 0.5, 14);
  EXPECT_EQ(r.face_size, 3u);
  EXPECT_EQ(r.verdict, Verdict::Holds);
  EXPECT_DOUBLE_EQ(r.chain_value, 0.5 / (4 * 0.2 * 3));
  // the chain's unconditional middle steps
  EXPECT_GE(r.avg_halfspace.lower, r.avg_box_face.upper);
  EXPECT_GE(r.avg_box_face.upper * 2 * 2 * 0.2 * 3, r.phi_n.lower);
}

TEST(AvgLower, PreconditionMetNearCriticality) {
  // phi(Lambda_1) stays above 1 - eps, so the bound is checked for real
  const AvgLowerReport r = halfspace_avg_lower_check(ModelParams{2, 0.0, 0.24}, 1, 0.5, 40);
  EXPECT_EQ(r.precondition, Verdict::Holds);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(r.verdict, Verdict::Holds);
}

TEST(MassBound, DominatesRowSums) {
  Workspace ws;
  const ModelParams p{2, 0.5, 0.1};
  const GreenRow& r = ws.row(p, Domain::whole(2), Point(2), 10);
  EXPECT_LE(r.total_lower() + r.slack, mass_bound(p));
  EXPECT_EQ(mass_bound(ModelParams{2, 0.0, 0.25}), kInf);
}
