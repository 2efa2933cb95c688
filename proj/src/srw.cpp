#include "wsaw/srw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Sparse>
#include <omp.h>

#include "wsaw/enclosure.hpp"

namespace wsaw {

namespace {

int team_size(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

std::vector<Point> sorted_sites(const Domain& domain) {
  if (!domain.is_finite()) throw Error("Green matrix needs a finite domain, got " + domain.to_string());
  std::vector<Point> sites = domain.points();
  std::sort(sites.begin(), sites.end());
  return sites;
}

std::ptrdiff_t find_site(const std::vector<Point>& sites, const Point& p) {
  auto it = std::lower_bound(sites.begin(), sites.end(), p);
  if (it == sites.end() || *it != p) return -1;
  return it - sites.begin();
}

void check_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error("beta must be finite and >= 0");
}

const char* kNotDefinite = "I - beta A is not positive definite: spectral radius of beta A_Lambda >= 1";

}  // namespace

std::ptrdiff_t GreenMatrix::index(const Point& p) const { return find_site(sites, p); }

double GreenMatrix::at(const Point& x, const Point& y) const {
  const auto i = index(x);
  const auto j = index(y);
  if (i < 0 || j < 0) return 0.0;
  return values(i, j);
}

GreenMatrix green_exact(int d, double beta, const Domain& domain) {
  check_beta(beta);
  if (domain.dim() != d) throw Error("domain dimension does not match d");
  GreenMatrix g;
  g.sites = sorted_sites(domain);
  const auto n = static_cast<Eigen::Index>(g.sites.size());
  if (g.sites.size() > kGreenDenseLimit) {
    throw Error("domain has " + std::to_string(n) + " sites; full Green matrices are limited to " +
                std::to_string(kGreenDenseLimit) + " (use green_exact_column)");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const Point& q : neighbors(g.sites[static_cast<std::size_t>(i)])) {
      const auto j = find_site(g.sites, q);
      if (j >= 0) m(i, j) -= beta;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw Error(kNotDefinite);
  g.values = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return g;
}

std::vector<double> green_exact_column(int d, double beta, const Domain& domain, const Point& y,
                                       std::vector<Point>* sites_out) {
  check_beta(beta);
  if (domain.dim() != d) throw Error("domain dimension does not match d");
  std::vector<Point> sites = sorted_sites(domain);
  const auto col = find_site(sites, y);
  if (col < 0) throw Error("point " + y.to_string() + " lies outside domain " + domain.to_string());
  const auto n = static_cast<Eigen::Index>(sites.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(sites.size() * static_cast<std::size_t>(2 * d + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 1.0);
    for (const Point& q : neighbors(sites[static_cast<std::size_t>(i)])) {
      const auto j = find_site(sites, q);
      if (j >= 0) trip.emplace_back(i, j, -beta);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(m);
  if (llt.info() != Eigen::Success) throw Error(kNotDefinite);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(col) = 1.0;
  const Eigen::VectorXd x = llt.solve(e);
  if (sites_out) *sites_out = sites;
  return std::vector<double>(x.data(), x.data() + n);
}

// ------------------------------------------------------------ gambler's ruin

std::vector<double> gambler_ruin_curve(int d, int n, int nsteps) {
  if (d < 1) throw Error("d must be >= 1");
  if (n < 0 || nsteps < 0) throw Error("n and nsteps must be >= 0");
  const double p = 1.0 / (2.0 * d);
  const double hold = 1.0 - 2.0 * p;
  // slot j holds x_1 = j - n, for x_1 in [-n, nsteps]
  const std::size_t width = static_cast<std::size_t>(n) + static_cast<std::size_t>(nsteps) + 2;
  std::vector<double> cur(width, 0.0), next(width, 0.0);
  cur[static_cast<std::size_t>(n)] = 1.0;
  std::vector<double> curve(static_cast<std::size_t>(nsteps) + 1, 0.0);
  CompensatedSum absorbed;
  for (int t = 0; t < nsteps; ++t) {
    const std::size_t hi = std::min(width - 2, static_cast<std::size_t>(n + t));
    absorbed.add(p * cur[0]);
    for (std::size_t j = 0; j <= hi + 1; ++j) {
      double v = hold * cur[j];
      if (j > 0) v += p * cur[j - 1];
      if (j + 1 < width) v += p * cur[j + 1];
      next[j] = v;
    }
    std::swap(cur, next);
    curve[static_cast<std::size_t>(t) + 1] = absorbed.value();
  }
  return curve;
}

double gambler_ruin_truncated(int d, int n, int nsteps) { return gambler_ruin_curve(d, n, nsteps).back(); }

// ------------------------------------------------------------ half-space visits

namespace {

class Binomials {
 public:
  explicit Binomials(int nmax) : lf_(static_cast<std::size_t>(nmax) + 1, 0.0) {
    for (std::size_t i = 1; i < lf_.size(); ++i) lf_[i] = lf_[i - 1] + std::log(static_cast<double>(i));
  }

  double log_choose(int n, int k) const {
    return lf_[static_cast<std::size_t>(n)] - lf_[static_cast<std::size_t>(k)] - lf_[static_cast<std::size_t>(n - k)];
  }

  // P[simple +-1 walk of t steps ends at c]
  double p1(int t, int c) const {
    c = std::abs(c);
    if (c > t || (t + c) % 2 != 0) return 0.0;
    return std::exp(log_choose(t, (t + c) / 2) - t * std::numbers::ln2);
  }

 private:
  std::vector<double> lf_;
};

// C[l] = sum_m Binom(l, m; p) A[m] B[l - m]
std::vector<double> mix(const Binomials& bin, const std::vector<double>& a, const std::vector<double>& b,
                        double p) {
  const std::size_t len = a.size();
  std::vector<double> c(len, 0.0);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  for (std::size_t l = 0; l < len; ++l) {
    CompensatedSum s;
    for (std::size_t m = 0; m <= l; ++m) {
      if (a[m] == 0.0 || b[l - m] == 0.0) continue;
      const double w = std::exp(bin.log_choose(static_cast<int>(l), static_cast<int>(m)) +
                                static_cast<double>(m) * lp + static_cast<double>(l - m) * lq);
      s.add(w * a[m] * b[l - m]);
    }
    c[l] = s.value();
  }
  return c;
}

// Q_r(s, y) for s < len: position law of an r-dimensional simple random walk.
std::vector<double> transverse_law(const Binomials& bin, const std::vector<int>& y, std::size_t len) {
  const std::size_t r = y.size();
  std::vector<double> q(len, 0.0);
  if (r == 1) {
    for (std::size_t s = 0; s < len; ++s) q[s] = bin.p1(static_cast<int>(s), y[0]);
    return q;
  }
  if (r == 2) {
    // rotate by 45 degrees: x + y and x - y are independent +-1 walks
    for (std::size_t s = 0; s < len; ++s) {
      q[s] = bin.p1(static_cast<int>(s), y[0] + y[1]) * bin.p1(static_cast<int>(s), y[0] - y[1]);
    }
    return q;
  }
  std::vector<double> head(len, 0.0);
  for (std::size_t s = 0; s < len; ++s) head[s] = bin.p1(static_cast<int>(s), y[0]);
  const std::vector<int> rest(y.begin() + 1, y.end());
  return mix(bin, head, transverse_law(bin, rest, len), 1.0 / static_cast<double>(r));
}

void check_halfspace_args(int d, const Point& x, int nsteps) {
  if (d <= 2) throw Error("half-space visit bound requires d > 2");
  if (x.dim() != d) throw Error("point dimension does not match d");
  if (x[0] < 0) throw Error("point " + x.to_string() + " lies outside H_0");
  if (nsteps < 0) throw Error("nsteps must be >= 0");
}

}  // namespace

double halfspace_visits(int d, const Point& x, int nsteps) {
  check_halfspace_args(d, x, nsteps);
  if (nsteps == 0) return 0.0;
  const std::size_t len = static_cast<std::size_t>(nsteps);
  const Binomials bin(nsteps);
  const int k = x[0];
  // walk of m steps on the first axis that never drops below 0 and ends at k
  // (ballot theorem: P[S_m = k] - P[S_m = k + 2])
  std::vector<double> first(len, 0.0);
  for (std::size_t m = static_cast<std::size_t>(k); m < len; m += 2) {
    const int mi = static_cast<int>(m);
    first[m] = bin.p1(mi, k) * (k + 1) / ((mi + k) / 2 + 1);
  }
  std::vector<int> perp;
  for (int i = 1; i < d; ++i) perp.push_back(x[i]);
  const std::vector<double> q = transverse_law(bin, perp, len);
  const std::vector<double> law = mix(bin, first, q, 1.0 / d);
  CompensatedSum total;
  for (double v : law) total.add(v);
  return total.value();
}

double halfspace_visits_dp(int d, const Point& x, int nsteps) {
  check_halfspace_args(d, x, nsteps);
  if (nsteps == 0) return 0.0;
  // box x_1 in [0, nsteps], other coordinates in [-nsteps, nsteps]
  std::vector<std::size_t> ext(static_cast<std::size_t>(d));
  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  std::size_t total = 1;
  for (int i = d - 1; i >= 0; --i) {
    ext[static_cast<std::size_t>(i)] = i == 0 ? static_cast<std::size_t>(nsteps) + 1 : 2 * static_cast<std::size_t>(nsteps) + 1;
    stride[static_cast<std::size_t>(i)] = total;
    total *= ext[static_cast<std::size_t>(i)];
  }
  auto offset_of = [&](const Point& p) -> std::ptrdiff_t {
    std::size_t off = 0;
    for (int i = 0; i < d; ++i) {
      const int c = i == 0 ? p[i] : p[i] + nsteps;
      if (c < 0 || c >= static_cast<int>(ext[static_cast<std::size_t>(i)])) return -1;
      off += static_cast<std::size_t>(c) * stride[static_cast<std::size_t>(i)];
    }
    return static_cast<std::ptrdiff_t>(off);
  };
  const std::ptrdiff_t target = offset_of(x);
  if (target < 0) return 0.0;
  std::vector<double> cur(total, 0.0), next(total, 0.0);
  cur[static_cast<std::size_t>(offset_of(Point(d)))] = 1.0;
  const double p = 1.0 / (2.0 * d);
  CompensatedSum visits;
  for (int t = 0; t < nsteps; ++t) {
    visits.add(cur[static_cast<std::size_t>(target)]);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t off = 0; off < total; ++off) {
      const double m = cur[off];
      if (m == 0.0) continue;
      std::size_t rem = off;
      for (int i = 0; i < d; ++i) {
        const std::size_t c = rem / stride[static_cast<std::size_t>(i)];
        rem %= stride[static_cast<std::size_t>(i)];
        if (c + 1 < ext[static_cast<std::size_t>(i)]) next[off + stride[static_cast<std::size_t>(i)]] += p * m;
        if (c > 0) next[off - stride[static_cast<std::size_t>(i)]] += p * m;
        // c == 0 on axis 0 steps out of H_0 and is killed; on other axes the
        // box is never reached within nsteps
      }
    }
    std::swap(cur, next);
  }
  return visits.value();
}

// ------------------------------------------------------------ coupling

namespace {

void check_coupling_args(int d, const Point& u, const Point& v) {
  if (u.dim() != d || v.dim() != d) throw Error("point dimension does not match d");
  for (int i = 0; i < d; ++i) {
    if ((u[i] - v[i]) % 2 != 0) {
      throw Error("reflection coupling needs u - v with even coordinates, got " + (u - v).to_string());
    }
  }
}

// One coupled step; returns true when the walks coincide afterwards.
bool coupled_step(std::mt19937_64& g, int d, Point& x, Point& y) {
  const auto j = static_cast<int>(uniform_below(g, 2 * static_cast<std::uint64_t>(d)));
  const int axis = j / 2;
  const int s = (j % 2 == 0) ? 1 : -1;
  int active = -1;
  for (int i = 0; i < d; ++i) {
    if (x[i] != y[i]) {
      active = i;
      break;
    }
  }
  x[axis] += s;
  y[axis] += axis == active ? -s : s;
  return x == y;
}

std::pair<std::size_t, std::size_t> chunk_range(std::size_t c, std::size_t trials) {
  return {c * trials / kMcChunks, (c + 1) * trials / kMcChunks};
}

}  // namespace

std::vector<SurvivalPoint> coupling_merge_stats(int d, const Point& u, const Point& v, int horizon,
                                                std::size_t trials, const RandomSource& rng, int threads) {
  check_coupling_args(d, u, v);
  if (horizon < 0) throw Error("horizon must be >= 0");
  if (trials < 1) throw Error("trials must be >= 1");
  const std::size_t h = static_cast<std::size_t>(horizon);
  // merge-time histogram per chunk; index h + 1 means "not merged by horizon"
  std::vector<std::vector<std::uint64_t>> hist(kMcChunks, std::vector<std::uint64_t>(h + 2, 0));
#pragma omp parallel for schedule(dynamic, 1) num_threads(team_size(threads))
  for (std::size_t c = 0; c < kMcChunks; ++c) {
    std::mt19937_64 g = rng.substream(c);
    const auto [lo, hi] = chunk_range(c, trials);
    for (std::size_t t = lo; t < hi; ++t) {
      Point x = u, y = v;
      std::size_t merged = x == y ? 0 : h + 1;
      for (std::size_t n = 1; n <= h && merged > h; ++n) {
        if (coupled_step(g, d, x, y)) merged = n;
      }
      ++hist[c][merged];
    }
  }
  std::vector<std::uint64_t> total(h + 2, 0);
  for (const auto& hc : hist)
    for (std::size_t i = 0; i < hc.size(); ++i) total[i] += hc[i];
  std::vector<SurvivalPoint> out(h + 1);
  std::uint64_t alive = static_cast<std::uint64_t>(trials);
  const double nt = static_cast<double>(trials);
  for (std::size_t n = 0; n <= h; ++n) {
    alive -= total[n];
    const double p = static_cast<double>(alive) / nt;
    out[n] = SurvivalPoint{static_cast<int>(n), p, std::sqrt(p * (1.0 - p) / nt)};
  }
  return out;
}

std::vector<std::pair<Point, Point>> coupling_samples(int d, const Point& u, const Point& v, int steps,
                                                      std::size_t trials, const RandomSource& rng) {
  check_coupling_args(d, u, v);
  std::mt19937_64 g = rng.substream(0);
  std::vector<std::pair<Point, Point>> out;
  out.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Point x = u, y = v;
    for (int n = 0; n < steps; ++n) coupled_step(g, d, x, y);
    out.emplace_back(x, y);
  }
  return out;
}

// ------------------------------------------------------------ exit time

McMean exit_time_mean(int d, int L, const Point& start, std::size_t trials, const RandomSource& rng,
                      int threads) {
  if (L < 1) throw Error("L must be >= 1");
  if (start.dim() != d) throw Error("point dimension does not match d");
  if (start.sup_norm() > L - 1) throw Error("start must lie in Lambda_{L-1}");
  if (trials < 1) throw Error("trials must be >= 1");
  std::vector<CompensatedSum> sum(kMcChunks), sum_sq(kMcChunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(team_size(threads))
  for (std::size_t c = 0; c < kMcChunks; ++c) {
    std::mt19937_64 g = rng.substream(c);
    const auto [lo, hi] = chunk_range(c, trials);
    for (std::size_t t = lo; t < hi; ++t) {
      Point x = start;
      std::uint64_t tau = 0;
      while (x.sup_norm() <= L - 1) {
        const auto j = static_cast<int>(uniform_below(g, 2 * static_cast<std::uint64_t>(d)));
        x[j / 2] += (j % 2 == 0) ? 1 : -1;
        ++tau;
      }
      const double v = static_cast<double>(tau);
      sum[c].add(v);
      sum_sq[c].add(v * v);
    }
  }
  CompensatedSum s, s2;
  for (std::size_t c = 0; c < kMcChunks; ++c) {
    s.add(sum[c]);
    s2.add(sum_sq[c]);
  }
  const double n = static_cast<double>(trials);
  McMean r;
  r.samples = trials;
  r.mean = s.value() / n;
  const double var = trials > 1 ? std::max(0.0, (s2.value() - n * r.mean * r.mean) / (n - 1.0)) : 0.0;
  r.std_error = std::sqrt(var / n);
  return r;
}

}  // namespace wsaw
