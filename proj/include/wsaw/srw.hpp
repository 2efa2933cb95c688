#pragma once

// Simple random walk (lambda = 0) reference computations: Dirichlet Green
// functions by linear solve, the gambler's-ruin exit probability, half-space
// visit counts, the reflection coupling and box exit times.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "wsaw/lattice.hpp"
#include "wsaw/rng.hpp"

namespace wsaw {

/// G = (I - beta A_Lambda)^{-1} on a finite domain, sites in sorted order.
struct GreenMatrix {
  std::vector<Point> sites;
  Eigen::MatrixXd values;

  std::ptrdiff_t index(const Point& p) const;
  /// G(x, y); zero when either point lies outside the domain.
  double at(const Point& x, const Point& y) const;
};

/// Dense matrices are formed up to this many sites.
inline constexpr std::size_t kGreenDenseLimit = 4096;

/// Full Green matrix. Positive definiteness of I - beta A (equivalently
/// spectral radius of beta A below 1) is certified by the Cholesky
/// factorization; failure raises Error.
GreenMatrix green_exact(int d, double beta, const Domain& domain);

/// One column y -> G(., y) over `sites` (sorted domain points), using a sparse
/// Cholesky factorization; suitable for domains too large for green_exact.
std::vector<double> green_exact_column(int d, double beta, const Domain& domain, const Point& y,
                                       std::vector<Point>* sites = nullptr);

/// P_0[tau^n <= k] for k = 0..nsteps, where tau^n is the exit time of H_n; the
/// first coordinate moves +-1 with probability 1/(2d) each and holds otherwise.
std::vector<double> gambler_ruin_curve(int d, int n, int nsteps);
double gambler_ruin_truncated(int d, int n, int nsteps);

/// E_0[ sum_{l < tau^0 ^ nsteps} 1{X_l = x} ] for x in H_0, d > 2.
///
/// Exact decomposition: the first coordinate takes a Binomial(l, 1/d) number of
/// the steps; stopped at 0 it survives with the ballot-theorem weight, and the
/// transverse coordinates form an independent (d-1)-dimensional walk.
double halfspace_visits(int d, const Point& x, int nsteps);

/// Same quantity by a slab dynamic program over H_0 intersected with
/// Lambda_nsteps. Cost grows like nsteps^{d+1}; used as a test oracle.
double halfspace_visits_dp(int d, const Point& x, int nsteps);

struct SurvivalPoint {
  int n = 0;
  double p = 0.0;  // P[not merged by n]
  double std_error = 0.0;
};

/// Reflection coupling of two walks from u and v. Coordinates that agree move
/// together; the first disagreeing coordinate moves in mirror image until the
/// two walks agree there, then the next one. Each marginal is a simple random
/// walk. Requires every coordinate of u - v to be even.
std::vector<SurvivalPoint> coupling_merge_stats(int d, const Point& u, const Point& v, int horizon,
                                                std::size_t trials, const RandomSource& rng,
                                                int threads = 0);

/// Runs the coupling for `steps` steps and returns the final positions of both
/// walks for each trial (for marginal checks).
std::vector<std::pair<Point, Point>> coupling_samples(int d, const Point& u, const Point& v, int steps,
                                                      std::size_t trials, const RandomSource& rng);

struct McMean {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Mean exit time of Lambda_{L-1} for a walk from `start`.
McMean exit_time_mean(int d, int L, const Point& start, std::size_t trials, const RandomSource& rng,
                      int threads = 0);

/// Number of fixed chunks Monte Carlo work is split into; each chunk owns one
/// PRNG substream, so results do not depend on the thread count.
inline constexpr std::size_t kMcChunks = 64;

}  // namespace wsaw
