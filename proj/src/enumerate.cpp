#include "wsaw/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace wsaw {

// ------------------------------------------------------------ GreenRow

double GreenRow::lower_at(const Point& y) const {
  auto it = std::lower_bound(endpoints.begin(), endpoints.end(), y);
  if (it == endpoints.end() || *it != y) return 0.0;
  return lower[static_cast<std::size_t>(it - endpoints.begin())];
}

double GreenRow::lower_hi(std::size_t i) const {
  const double exact = endpoints[i] == start ? 1.0 : 0.0;
  const double excess = lower[i] - exact;
  if (!(excess > 0.0)) return lower[i];
  // the allowance can be far below one ulp of the value; round outward anyway
  return std::nextafter(lower[i] + rounding * excess, kInf);
}

double GreenRow::lower_hi_at(const Point& y) const {
  auto it = std::lower_bound(endpoints.begin(), endpoints.end(), y);
  if (it == endpoints.end() || *it != y) return 0.0;
  return lower_hi(static_cast<std::size_t>(it - endpoints.begin()));
}

Enclosure GreenRow::at(const Point& y) const {
  const double l = lower_at(y);
  if (!rigorous) return Enclosure{l, kInf, n, false};
  const double hi = lower_hi_at(y);
  return Enclosure{l, add_up(hi, slack), n, true};
}

double GreenRow::total_lower() const {
  CompensatedSum s;
  for (double v : lower) s.add(v);
  return s.value();
}

double GreenRow::max_lower() const {
  double m = 0.0;
  for (double v : lower) m = std::max(m, v);
  return m;
}

double GreenRow::max_upper() const {
  if (!rigorous) return kInf;
  double m = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) m = std::max(m, lower_hi(i));
  return add_up(m, slack);
}

int max_inner_degree(const Domain& domain) {
  if (!domain.is_finite()) return 2 * domain.dim();
  int best = 0;
  for (const Point& p : domain.points()) {
    int deg = 0;
    for (const Point& q : neighbors(p)) deg += domain.contains_unchecked(q) ? 1 : 0;
    best = std::max(best, deg);
    if (best == 2 * domain.dim()) break;
  }
  return best;
}

double tail_ratio(const ModelParams& params, int degree) {
  return std::max(0.0, degree - params.lambda) * params.beta;
}

double tail_slack(const ModelParams& params, int degree, int n, double mass_at_n) {
  const double q = tail_ratio(params, degree);
  if (!(q < 1.0)) return kInf;
  if (mass_at_n == 0.0) return 0.0;
  const double q1 = n == 0 ? degree * params.beta : q;
  // a few ulps of outward rounding on the quotient
  return mass_at_n * q1 / (1.0 - q) * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
}

namespace {

struct PowTables {
  std::vector<double> beta_pow;
  std::vector<double> rho_pow;
  bool free = false;

  PowTables(int n, double beta, double lambda) : free(lambda == 0.0) {
    beta_pow.resize(static_cast<std::size_t>(n) + 1);
    rho_pow.resize(static_cast<std::size_t>(max_pairs(n)) + 1);
    beta_pow[0] = 1.0;
    for (std::size_t k = 1; k < beta_pow.size(); ++k) beta_pow[k] = beta_pow[k - 1] * beta;
    rho_pow[0] = 1.0;
    for (std::size_t p = 1; p < rho_pow.size(); ++p) rho_pow[p] = rho_pow[p - 1] * (1.0 - lambda);
  }
};

double evaluate_block_with(const WalkCensus& c, std::size_t i, const PowTables& pw) {
  CompensatedSum s;
  const std::uint64_t* b = c.block(i);
  for (int k = 0; k <= c.max_length(); ++k) {
    const std::size_t off = c.offset(k);
    const int pmax = max_pairs(k);
    if (pw.free) {
      // rho = 1: add the exact integer counts first, one term per length
      std::uint64_t total = 0;
      for (int p = 0; p <= pmax; ++p) total += b[off + static_cast<std::size_t>(p)];
      if (total) s.add(static_cast<double>(total) * pw.beta_pow[static_cast<std::size_t>(k)]);
      continue;
    }
    for (int p = 0; p <= pmax; ++p) {
      const std::uint64_t v = b[off + static_cast<std::size_t>(p)];
      if (v) s.add(static_cast<double>(v) * pw.beta_pow[static_cast<std::size_t>(k)] * pw.rho_pow[static_cast<std::size_t>(p)]);
    }
  }
  return s.value();
}

std::string bits(double v) {
  std::uint64_t u = 0;
  std::memcpy(&u, &v, sizeof u);
  return std::to_string(u);
}

std::string key_of(const Domain& domain, const Point& start, int n) {
  return domain.to_string() + "|" + start.to_string() + "|" + std::to_string(n);
}

GreenRow map_row(const GreenRow& rep_row, const Point& start, const Symmetry& to_rep) {
  const Symmetry back = to_rep.inverse();
  std::vector<std::pair<Point, double>> entries;
  entries.reserve(rep_row.endpoints.size());
  for (std::size_t i = 0; i < rep_row.endpoints.size(); ++i) {
    entries.emplace_back(back.apply(rep_row.endpoints[i]), rep_row.lower[i]);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  GreenRow r = rep_row;
  r.start = start;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    r.endpoints[i] = entries[i].first;
    r.lower[i] = entries[i].second;
  }
  return r;
}

}  // namespace

double evaluate_block(const WalkCensus& c, std::size_t endpoint_index, double beta, double lambda) {
  return evaluate_block_with(c, endpoint_index, PowTables(c.max_length(), beta, lambda));
}

// ------------------------------------------------------------ Workspace

Workspace::Workspace(int threads, Kernel kernel, bool use_symmetry)
    : threads_(threads), kernel_(kernel), use_symmetry_(use_symmetry) {}

void Workspace::clear() {
  censuses_.clear();
  rows_.clear();
}

bool Workspace::uses_census(const ModelParams& params) const {
  return kernel_ != Kernel::Auto || params.lambda > 0.0;
}

Workspace::Canonical Workspace::canonicalize(const Domain& domain, const Point& start) const {
  Canonical c{start, Symmetry::identity(start.dim())};
  if (!use_symmetry_ || start.dim() > 4) return c;
  for (const auto& g : hyperoctahedral_group(start.dim())) {
    const Point img = g.apply(start);
    if (img < c.rep && domain.invariant_under(g)) {
      c.rep = img;
      c.to_rep = g;
    }
  }
  return c;
}

const WalkCensus& Workspace::census(const ModelParams& params, const Domain& domain, const Point& start,
                                    int n) {
  params.validate();
  const bool saw_only = params.lambda == 1.0;
  const std::string suffix = saw_only ? "|saw" : "|all";
  const std::string key = key_of(domain, start, n) + suffix;
  if (auto it = censuses_.find(key); it != censuses_.end()) return it->second;

  const Canonical canon = canonicalize(domain, start);
  if (canon.rep != start) {
    const WalkCensus& rep = census(params, domain, canon.rep, n);
    return censuses_.emplace(key, rep.transformed(canon.to_rep.inverse())).first->second;
  }
  if (!domain.contains(start)) {
    throw Error("start point " + start.to_string() + " lies outside domain " + domain.to_string());
  }
  WalkCensus c = kernel_ == Kernel::CensusSerial ? census_serial(domain, start, n, saw_only)
                                                 : census_parallel(domain, start, n, saw_only, threads_);
  return censuses_.emplace(key, std::move(c)).first->second;
}

const GreenRow& Workspace::row(const ModelParams& params, const Domain& domain, const Point& start, int n) {
  params.validate();
  if (start.dim() != params.d || domain.dim() != params.d) {
    throw Error("dimension mismatch between parameters, domain and start point");
  }
  const bool by_census = uses_census(params);
  const std::string key = key_of(domain, start, n) + "|" + bits(params.beta) + "|" +
                          bits(params.lambda) + (by_census ? "|c" : "|f");
  if (auto it = rows_.find(key); it != rows_.end()) return it->second;
  if (!domain.contains(start)) {
    throw Error("start point " + start.to_string() + " lies outside domain " + domain.to_string());
  }

  const Canonical canon = canonicalize(domain, start);
  if (canon.rep != start) {
    const GreenRow& rep = row(params, domain, canon.rep, n);
    return rows_.emplace(key, map_row(rep, start, canon.to_rep)).first->second;
  }

  GreenRow r;
  r.start = start;
  r.n = n;
  const int degree = max_inner_degree(domain);
  r.rigorous = tail_ratio(params, degree) < 1.0;
  constexpr double u = std::numeric_limits<double>::epsilon() / 2;
  if (by_census) {
    const WalkCensus& c = census(params, domain, start, n);
    const PowTables pw(n, params.beta, params.lambda);
    r.endpoints = c.endpoints();
    r.lower.reserve(r.endpoints.size());
    CompensatedSum mass;
    for (std::size_t i = 0; i < c.endpoint_count(); ++i) {
      r.lower.push_back(evaluate_block_with(c, i, pw));
      const std::uint64_t* b = c.block(i);
      for (int p = 0; p <= max_pairs(n); ++p) {
        const std::uint64_t v = b[c.offset(n) + static_cast<std::size_t>(p)];
        if (v) mass.add(static_cast<double>(v) * pw.beta_pow[static_cast<std::size_t>(n)] * pw.rho_pow[static_cast<std::size_t>(p)]);
      }
    }
    r.mass_at_n = mass.value();
    r.rounding = 2.0 * (n + max_pairs(n) + 8) * u;
  } else {
    FreeWalkSums f = free_walk_sums(domain, start, n, params.beta, threads_);
    r.endpoints = std::move(f.endpoints);
    r.lower = std::move(f.sums);
    r.mass_at_n = f.mass_at_n;
    r.rounding = 4.0 * (n + 8) * (2.0 + std::log2(2.0 * params.d)) * u;
  }
  r.slack = tail_slack(params, degree, n, r.mass_at_n);
  return rows_.emplace(key, std::move(r)).first->second;
}

// ------------------------------------------------------------ operations

namespace {

Workspace& local_or(Workspace* ws, std::unique_ptr<Workspace>& holder) {
  if (ws) return *ws;
  holder = std::make_unique<Workspace>();
  return *holder;
}

}  // namespace

GreenRow green_row(const ModelParams& params, const Domain& domain, const Point& x, int n, Workspace* ws) {
  std::unique_ptr<Workspace> holder;
  return local_or(ws, holder).row(params, domain, x, n);
}

Enclosure green(const ModelParams& params, const Domain& domain, const Point& x, const Point& y, int n,
                Workspace* ws) {
  if (!domain.contains(y)) {
    throw Error("end point " + y.to_string() + " lies outside domain " + domain.to_string());
  }
  std::unique_ptr<Workspace> holder;
  return local_or(ws, holder).row(params, domain, x, n).at(y);
}

Enclosure exit_mass(const ModelParams& params, const Domain& s, const Domain& domain, const Point& x, int n,
                    Workspace& ws) {
  const Point origin(params.d);
  if (same_set(s, domain)) return Enclosure::exact(0.0, n);
  const GreenRow& big = ws.row(params, domain, origin, n);
  if (ws.uses_census(params)) {
    const WalkCensus& cb = ws.census(params, domain, origin, n);
    const WalkCensus& cs = ws.census(params, s, origin, n);
    const auto ib = cb.find(x);
    const auto is = cs.find(x);
    double lower = 0.0;
    if (ib >= 0) {
      const PowTables pw(n, params.beta, params.lambda);
      CompensatedSum acc;
      for (int k = 0; k <= n; ++k) {
        for (int p = 0; p <= max_pairs(k); ++p) {
          const std::uint64_t a = cb.count(static_cast<std::size_t>(ib), k, p);
          const std::uint64_t b = is >= 0 ? cs.count(static_cast<std::size_t>(is), k, p) : 0;
          if (b > a) throw Error("exit_mass: S is not contained in the enclosing domain");
          if (a > b) acc.add(static_cast<double>(a - b) * pw.beta_pow[static_cast<std::size_t>(k)] * pw.rho_pow[static_cast<std::size_t>(p)]);
        }
      }
      lower = acc.value();
    }
    const double upper = add_up(lower, big.rounding * lower + big.slack);
    return Enclosure{lower, big.rigorous ? upper : kInf, n, big.rigorous};
  }
  const GreenRow& small = ws.row(params, s, origin, n);
  const double lower = std::max(0.0, big.lower_at(x) - small.lower_at(x));
  const double small_lo = small.lower_at(x) - (small.lower_hi_at(x) - small.lower_at(x));
  const double upper = add_up(std::max(lower, big.lower_hi_at(x) - small_lo), big.slack);
  return Enclosure{lower, big.rigorous ? upper : kInf, n, big.rigorous};
}

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

// Outward rounding for uppers that went through inexact arithmetic.
double widen(double upper, double lower) { return upper == lower ? upper : upper * (1.0 + 4.0 * kUlp); }

}  // namespace

Enclosure phi(const ModelParams& params, const Domain& s, int n, Workspace* ws) {
  const Point origin(params.d);
  if (!s.contains(origin)) throw Error("phi requires 0 in S; S = " + s.to_string());
  std::unique_ptr<Workspace> holder;
  const GreenRow& r = local_or(ws, holder).row(params, s, origin, n);
  const Domain whole = Domain::whole(params.d);
  CompensatedSum lo;
  CompensatedSum hi;
  for (std::size_t i = 0; i < r.endpoints.size(); ++i) {
    const int deg = exit_degree(s, whole, r.endpoints[i]);
    if (deg) {
      lo.add(deg * r.lower[i]);
      hi.add(deg * r.lower_hi(i));
    }
  }
  const double lower = params.beta * lo.value();
  if (!r.rigorous) return Enclosure::partial(lower, n);
  const double upper = params.beta * hi.value() + 2.0 * params.d * params.beta * r.slack;
  return Enclosure{lower, widen(upper, lower), n, true};
}

Enclosure chi_truncated(const ModelParams& params, int n, Workspace* ws) {
  std::unique_ptr<Workspace> holder;
  const GreenRow& r = local_or(ws, holder).row(params, Domain::whole(params.d), Point(params.d), n);
  const double lower = r.total_lower();
  if (!r.rigorous) return Enclosure::partial(lower, n);
  CompensatedSum hi;
  for (std::size_t i = 0; i < r.endpoints.size(); ++i) hi.add(r.lower_hi(i));
  return Enclosure{lower, widen(hi.value() + r.slack, lower), n, true};
}

BubbleBound bubble_truncated(const ModelParams& params, int n, int window, Workspace* ws) {
  if (window < 0) throw Error("bubble window R must be >= 0");
  std::unique_ptr<Workspace> holder;
  const GreenRow& r = local_or(ws, holder).row(params, Domain::whole(params.d), Point(params.d), n);
  BubbleBound b;
  b.n = n;
  b.window = window;
  CompensatedSum in_window;
  CompensatedSum all;
  CompensatedSum hi;
  double max_hi = 0.0;
  for (std::size_t i = 0; i < r.endpoints.size(); ++i) {
    const double sq = r.lower[i] * r.lower[i];
    all.add(sq);
    if (r.endpoints[i].sup_norm() <= window) in_window.add(sq);
    const double h = r.lower_hi(i);
    hi.add(h * h);
    max_hi = std::max(max_hi, h);
  }
  b.window_lower = in_window.value();
  b.lower = all.value();
  b.rigorous = r.rigorous;
  if (r.rigorous) {
    // sum (h + e)^2 with e >= 0 and sum e <= slack
    b.upper = widen(hi.value() + 2.0 * max_hi * r.slack + r.slack * r.slack, b.lower);
  }
  return b;
}

}  // namespace wsaw
