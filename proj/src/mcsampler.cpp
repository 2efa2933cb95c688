#include "wsaw/mcsampler.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "wsaw/enclosure.hpp"
#include "wsaw/srw.hpp"

namespace wsaw {

McStrategy parse_strategy(const std::string& s) {
  if (s == "uniform") return McStrategy::Uniform;
  if (s == "nonreversing") return McStrategy::Nonreversing;
  throw Error("unknown Monte Carlo strategy '" + s + "' (uniform|nonreversing)");
}

std::string to_string(McStrategy s) { return s == McStrategy::Uniform ? "uniform" : "nonreversing"; }

namespace {

// Weight of one sampled walk of length n: beta^n rho / proposal probability,
// zero when it leaves the domain or misses y.
double sample_walk(std::mt19937_64& g, const ModelParams& params, const Domain& domain, const Point& x,
                   const Point& y, int n, McStrategy strategy, std::vector<Point>& path) {
  const int d = params.d;
  const auto dirs = static_cast<std::uint64_t>(2 * d);
  const double lam = params.lambda;
  path.clear();
  path.push_back(x);
  double w = 1.0;
  int prev_dir = -1;
  for (int step = 0; step < n; ++step) {
    int dir;
    double prob;
    if (strategy == McStrategy::Uniform || prev_dir < 0) {
      dir = static_cast<int>(uniform_below(g, dirs));
      prob = 1.0 / static_cast<double>(dirs);
    } else {
      const int back = prev_dir ^ 1;
      const double denom = 2.0 * d - lam;
      const double p_back = (1.0 - lam) / denom;
      if (uniform01(g) < p_back) {
        dir = back;
        prob = p_back;
      } else {
        // uniform over the other 2d - 1 directions
        int k = static_cast<int>(uniform_below(g, dirs - 1));
        if (k >= back) ++k;
        dir = k;
        prob = 1.0 / denom;
      }
    }
    const Point next = path.back() + Point::unit(d, dir / 2, dir % 2 == 0 ? 1 : -1);
    if (!domain.contains_unchecked(next)) return 0.0;
    int occ = 0;
    for (const Point& p : path) occ += p == next ? 1 : 0;
    if (occ > 0) {
      if (lam == 1.0) return 0.0;
      w *= std::pow(1.0 - lam, occ);
    }
    w *= params.beta / prob;
    path.push_back(next);
    prev_dir = dir;
  }
  return path.back() == y ? w : 0.0;
}

}  // namespace

McEstimate estimate_green_mc(const ModelParams& params, const Domain& domain, const Point& x, const Point& y,
                             int nmax, std::size_t samples, const RandomSource& rng, McStrategy strategy,
                             int threads) {
  params.validate();
  if (!domain.contains(x) || !domain.contains(y)) throw Error("x and y must lie in Lambda");
  if (nmax < 0) throw Error("nmax must be >= 0");
  if (samples < 1) throw Error("samples must be >= 1");
  const std::size_t lengths = static_cast<std::size_t>(nmax) + 1;
  const std::size_t tasks = lengths * kMcChunks;
  std::vector<CompensatedSum> sum(tasks), sum_sq(tasks);
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(team)
  {
    std::vector<Point> path;
#pragma omp for schedule(dynamic, 1)
    for (std::size_t task = 0; task < tasks; ++task) {
      const int n = static_cast<int>(task / kMcChunks);
      const std::size_t c = task % kMcChunks;
      std::mt19937_64 g = rng.substream(task);
      const std::size_t lo = c * samples / kMcChunks;
      const std::size_t hi = (c + 1) * samples / kMcChunks;
      for (std::size_t s = lo; s < hi; ++s) {
        const double w = sample_walk(g, params, domain, x, y, n, strategy, path);
        if (w != 0.0) {
          sum[task].add(w);
          sum_sq[task].add(w * w);
        }
      }
    }
  }
  McEstimate est;
  est.samples = samples;
  const double m = static_cast<double>(samples);
  CompensatedSum total;
  double var_total = 0.0;
  for (std::size_t n = 0; n < lengths; ++n) {
    CompensatedSum s, s2;
    for (std::size_t c = 0; c < kMcChunks; ++c) {
      s.add(sum[n * kMcChunks + c]);
      s2.add(sum_sq[n * kMcChunks + c]);
    }
    const double mean = s.value() / m;
    const double var = samples > 1 ? std::max(0.0, (s2.value() - m * mean * mean) / (m - 1.0)) : 0.0;
    est.per_length.push_back(McLength{static_cast<int>(n), mean, std::sqrt(var / m)});
    total.add(mean);
    var_total += var / m;
  }
  est.mean = total.value();
  est.std_error = std::sqrt(var_total);
  return est;
}

}  // namespace wsaw
