#include "wsaw/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "wsaw/observables.hpp"
#include "wsaw/srw.hpp"

namespace wsaw {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

void require_setup(const ModelParams& params, const Domain& s, const Domain& domain, const Point& x) {
  params.validate();
  if (s.dim() != params.d || domain.dim() != params.d || x.dim() != params.d) {
    throw Error("dimension mismatch between parameters, domains and points");
  }
  if (!s.contains(Point(params.d))) throw Error("0 must lie in S = " + s.to_string());
  if (!domain.contains(x)) throw Error("x = " + x.to_string() + " lies outside Lambda = " + domain.to_string());
  if (s.is_finite()) {
    for (const Point& p : s.points()) {
      if (!domain.contains_unchecked(p)) {
        throw Error("S must be contained in Lambda; " + p.to_string() + " is not");
      }
    }
  }
}

// sum_{y in S, z in Lambda\S, y~z} G^S(0,y) beta G^Lambda(z,x)
Enclosure exit_sum(const ModelParams& params, const Domain& s, const Domain& domain, const Point& x, int n,
                   Workspace& ws, std::size_t* edge_count) {
  const GreenRow& r0 = ws.row(params, s, Point(params.d), n);
  Enclosure e{0.0, 0.0, n, r0.rigorous};
  if (edge_count) *edge_count = 0;
  if (same_set(s, domain)) return e;
  CompensatedSum lo, hi;
  for (std::size_t i = 0; i < r0.endpoints.size(); ++i) {
    const Point& y = r0.endpoints[i];
    for (const Point& z : neighbors(y)) {
      if (s.contains_unchecked(z) || !domain.contains_unchecked(z)) continue;
      if (edge_count) ++*edge_count;
      const GreenRow& rz = ws.row(params, domain, z, n);
      lo.add(r0.lower[i] * rz.lower_at(x));
      if (r0.rigorous) hi.add(r0.lower_hi(i) * add_up(rz.lower_hi_at(x), rz.slack));
    }
  }
  e.lower = params.beta * lo.value();
  if (!r0.rigorous) {
    e.upper = kInf;
    return e;
  }
  // walks to y that were not enumerated: total mass <= slack, at most 2d exit
  // edges per y, and G^Lambda(z,x) <= mass_bound
  const double unreached = 2.0 * params.d * r0.slack * mass_bound(params);
  e.upper = params.beta * (hi.value() + unreached) * (1.0 + 8.0 * kUlp);
  return e;
}

}  // namespace

nlohmann::json to_json(const Enclosure& e) {
  nlohmann::json j;
  j["lower"] = e.lower;
  j["upper"] = std::isfinite(e.upper) ? nlohmann::json(e.upper) : nlohmann::json(nullptr);
  j["N"] = e.truncation_n;
  j["rigorous"] = e.rigorous;
  return j;
}

nlohmann::json instance_record(const ModelParams& params) {
  return nlohmann::json{{"d", params.d}, {"lambda", params.lambda}, {"beta", params.beta}};
}

nlohmann::json to_json(const VerdictReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["verdict"] = to_string(r.verdict);
  j["lhs"] = to_json(r.lhs);
  j["rhs"] = to_json(r.rhs);
  j["margin"] = std::isfinite(r.margin) ? nlohmann::json(r.margin) : nlohmann::json(nullptr);
  j["instance"] = r.instance;
  j["details"] = r.details;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Verdict combine(const std::vector<Verdict>& verdicts) {
  Verdict out = Verdict::Holds;
  for (Verdict v : verdicts) {
    if (v == Verdict::Fails) return Verdict::Fails;
    if (v == Verdict::Inconclusive) out = Verdict::Inconclusive;
  }
  return out;
}

// ------------------------------------------------------------ Simon-Lieb

namespace {

struct SimonLiebParts {
  Enclosure g_lambda;    // G^Lambda(0,x)
  Enclosure g_s;         // G^S(0,x)
  Enclosure difference;  // G^Lambda(0,x) - G^S(0,x)
  Enclosure exits;
  std::size_t edges = 0;
};

SimonLiebParts simon_lieb_parts(const ModelParams& params, const Domain& s, const Domain& domain, const Point& x,
                                int n, Workspace& ws) {
  require_setup(params, s, domain, x);
  const Point origin(params.d);
  SimonLiebParts p;
  p.g_lambda = ws.row(params, domain, origin, n).at(x);
  const GreenRow& rs = ws.row(params, s, origin, n);
  p.g_s = s.contains(x) ? rs.at(x) : Enclosure::exact(0.0, n);
  p.difference = exit_mass(params, s, domain, x, n, ws);
  p.exits = exit_sum(params, s, domain, x, n, ws, &p.edges);
  return p;
}

nlohmann::json sl_instance(const ModelParams& params, const Domain& s, const Domain& domain, const Point& x,
                           int n) {
  nlohmann::json j = instance_record(params);
  j["S"] = s.to_string();
  j["Lambda"] = domain.to_string();
  j["x"] = x.coords();
  j["N"] = n;
  return j;
}

}  // namespace

VerdictReport check_simon_lieb_upper(const ModelParams& params, const Domain& s, const Domain& domain,
                                     const Point& x, int n, Workspace& ws) {
  const SimonLiebParts p = simon_lieb_parts(params, s, domain, x, n, ws);
  VerdictReport r;
  r.check = "sl-upper";
  r.instance = sl_instance(params, s, domain, x, n);
  r.lhs = p.g_lambda;
  r.rhs = p.g_s + p.exits;
  r.verdict = decide_le(p.difference, p.exits);
  r.margin = margin_le(p.difference, p.exits);
  r.details["difference"] = to_json(p.difference);
  r.details["exit_sum"] = to_json(p.exits);
  r.details["exit_edges"] = p.edges;
  r.details["G_S"] = to_json(p.g_s);
  return r;
}

VerdictReport check_simon_lieb_reversed(const ModelParams& params, const Domain& s, const Domain& domain,
                                        const Point& x, int n, Workspace& ws) {
  const SimonLiebParts p = simon_lieb_parts(params, s, domain, x, n, ws);
  // sum_u E(u) G^Lambda(u, x)
  Enclosure err{0.0, 0.0, n, p.exits.rigorous};
  if (params.lambda > 0.0 && params.beta > 0.0 && !same_set(s, domain)) {
    const ErrorAmplitudeResult ea = error_amplitude(params, s, domain, n, ws);
    CompensatedSum lo, hi;
    for (const auto& [u, e] : ea.per_u) {
      const Enclosure g = ws.row(params, domain, u, n).at(x);
      lo.add(e.lower * g.lower);
      hi.add((e * g).upper);
    }
    err.lower = lo.value();
    err.upper = ea.total.rigorous ? (hi.value() + ea.remainder.upper * mass_bound(params)) * (1.0 + 8.0 * kUlp)
                                  : kInf;
    err.rigorous = ea.total.rigorous;
  }
  const double lam = params.lambda;
  Enclosure smaller{p.exits.lower - lam * err.upper, p.exits.upper - lam * err.lower, n,
                    p.exits.rigorous && err.rigorous};
  if (lam == 0.0) smaller = p.exits;
  VerdictReport r;
  r.check = "sl-reversed";
  r.instance = sl_instance(params, s, domain, x, n);
  r.lhs = p.g_lambda;
  r.rhs = Enclosure{p.g_s.lower + smaller.lower, p.g_s.upper + smaller.upper, n, smaller.rigorous};
  r.verdict = decide_le(smaller, p.difference);
  r.margin = margin_le(smaller, p.difference);
  r.details["difference"] = to_json(p.difference);
  r.details["exit_sum"] = to_json(p.exits);
  r.details["error_term"] = to_json(err);
  r.details["exit_edges"] = p.edges;
  r.details["G_S"] = to_json(p.g_s);
  return r;
}

// ------------------------------------------------------------ weight sandwich

namespace {

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

SandwichReport check_weight_sandwich(const ModelParams& params, std::size_t trials, int max_len,
                                     const RandomSource& rng) {
  params.validate();
  if (trials < 1) throw Error("trials must be >= 1");
  if (max_len < 0) throw Error("max_len must be >= 0");
  using Rational = boost::multiprecision::cpp_rational;
  SandwichReport rep;
  rep.d = params.d;
  rep.lambda = params.lambda;
  rep.trials = trials;
  rep.max_len = max_len;
  const Rational lam_exact(params.lambda);  // exact value of the double
  std::mt19937_64 g = rng.substream(0);
  const int d = params.d;
  for (std::size_t t = 0; t < trials; ++t) {
    const int len1 = static_cast<int>(uniform_below(g, static_cast<std::uint64_t>(max_len) + 1));
    const int len2 = static_cast<int>(uniform_below(g, static_cast<std::uint64_t>(max_len) + 1));
    const Walk w1 = random_walk(g, Point(d), len1);
    const auto j = static_cast<int>(uniform_below(g, 2 * static_cast<std::uint64_t>(d)));
    const Point z = w1.back() + Point::unit(d, j / 2, j % 2 == 0 ? 1 : -1);
    const Walk w2 = random_walk(g, z, len2);
    const Walk whole = w1.concatenated(w2);

    const auto b = split_weight_bounds<double>(w1, w2, params.lambda);
    const double r = rho<double>(whole, params.lambda);
    const double tol_lo = 1e-12 * std::max({std::abs(b.lower), r, 1e-300});
    const double tol_hi = 1e-12 * std::max({b.upper, r, 1e-300});
    if (b.lower - r > tol_lo || r - b.upper > tol_hi) ++rep.violations;
    rep.min_lower_gap = std::min(rep.min_lower_gap, r - b.lower);
    rep.min_upper_gap = std::min(rep.min_upper_gap, b.upper - r);

    const auto be = split_weight_bounds<Rational>(w1, w2, lam_exact);
    const Rational re = rho<Rational>(whole, lam_exact);
    if (re < be.lower || re > be.upper) ++rep.exact_violations;
    if (re == be.upper) ++rep.upper_equalities;
  }
  rep.verdict = (rep.violations == 0 && rep.exact_violations == 0) ? Verdict::Holds : Verdict::Fails;
  return rep;
}

// ------------------------------------------------------------ bootstrap

BootstrapReport check_bootstrap_conditions(const ModelParams& params, double c, int nmax, int n,
                                           Workspace& ws) {
  params.validate();
  if (!(c > 0.0)) throw Error("C must be > 0");
  if (nmax < 0) throw Error("nmax must be >= 0");
  const int d = params.d;
  const Point origin(d);
  BootstrapReport rep;
  rep.c = c;
  std::vector<Verdict> all;
  for (int k = 0; k <= nmax; ++k) {
    const Domain h = Domain::half_space(d, k);
    BootstrapRow row;
    row.n = k;
    row.phi = phi(params, h, n, &ws);
    row.phi_threshold = 1.0 + 1.0 / (2.0 * d);
    row.phi_verdict = decide_lt(row.phi, Enclosure::exact(row.phi_threshold, n));

    const GreenRow& g = ws.row(params, h, origin, n);
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < g.endpoints.size(); ++i) {
      if (g.endpoints[i][0] != -k) continue;
      lo = std::max(lo, g.lower[i]);
      hi = std::max(hi, g.lower_hi(i));
    }
    row.g_max = Enclosure{lo, g.rigorous ? add_up(hi, g.slack) : kInf, n, g.rigorous};
    const double scale = std::pow(static_cast<double>(std::max(1, k)), d - 1);
    row.g_threshold = c / scale;
    row.g_verdict = decide_lt(row.g_max, Enclosure::exact(row.g_threshold, n));
    row.c_min = row.g_max.upper * scale;
    rep.c_min = std::max(rep.c_min, row.c_min);
    all.push_back(row.phi_verdict);
    all.push_back(row.g_verdict);
    rep.rows.push_back(row);
  }
  rep.verdict = combine(all);
  return rep;
}

// ------------------------------------------------------------ iterated decay

VerdictReport check_iterated_decay(const ModelParams& params, const Point& x, int n, Workspace& ws, int kmax) {
  params.validate();
  if (x.dim() != params.d) throw Error("point dimension does not match d");
  const SharpLengthResult sl = sharp_length(params, kmax, n, &ws);
  if (!sl.decided()) {
    throw Error("sharp length undecidable at these parameters (" + to_string(sl.status) + " at k = " +
                std::to_string(sl.value) + ")");
  }
  const int L = sl.value;
  VerdictReport r;
  r.check = "iterated-decay";
  r.instance = instance_record(params);
  r.instance["x"] = x.coords();
  r.instance["N"] = n;
  r.details["L_beta"] = L;
  const int k = x.sup_norm() / (L + 1) - 1;
  r.details["k"] = k;

  const Point origin(params.d);
  const GreenRow& row = ws.row(params, Domain::whole(params.d), origin, n);
  r.lhs = row.at(x);
  if (k <= 0) {
    r.verdict = Verdict::Inconclusive;
    r.rhs = Enclosure{0.0, kInf, n, false};
    r.margin = 0.0;
    r.note = "vacuous: k = floor(|x|/(L+1)) - 1 <= 0";
    return r;
  }
  // max{G(y,x) : |y - x| > L} = max{G(0,w) : |w| > L} by translation invariance
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < row.endpoints.size(); ++i) {
    if (row.endpoints[i].sup_norm() <= L) continue;
    lo = std::max(lo, row.lower[i]);
    hi = std::max(hi, row.lower_hi(i));
  }
  const Enclosure far{lo, row.rigorous ? add_up(hi, row.slack) : kInf, n, row.rigorous};
  const Enclosure phi_l = sl.phi_trace.back().second;
  Enclosure factor = Enclosure::exact(1.0, n);
  for (int i = 0; i < k; ++i) factor = factor * phi_l;
  r.rhs = factor * far;
  r.verdict = decide_le(r.lhs, r.rhs);
  r.margin = margin_le(r.lhs, r.rhs);
  r.details["phi_L"] = to_json(phi_l);
  r.details["phi_L_pow_k"] = to_json(factor);
  r.details["e_pow_minus_2k"] = std::exp(-2.0 * k);
  r.details["max_far"] = to_json(far);
  return r;
}

// ------------------------------------------------------------ Harnack

HarnackReport measure_harnack_ratio(const ModelParams& params, int n, double alpha, const Point& x, int box) {
  params.validate();
  if (params.lambda != 0.0) throw Error("Harnack ratios are measured for lambda = 0 only");
  if (n < 0 || !(alpha >= 0.0)) throw Error("need n >= 0 and alpha >= 0");
  const int d = params.d;
  HarnackReport rep;
  rep.n = n;
  rep.alpha = alpha;
  rep.outer = static_cast<int>(std::floor((1.0 + alpha) * n));
  rep.x = x;
  rep.box = box;
  if (x.sup_norm() <= rep.outer) throw Error("x must lie outside Lambda_{(1+alpha)n}");
  if (x.sup_norm() > box || rep.outer > box) throw Error("ambient box Lambda_R must contain x and Lambda_{(1+alpha)n}");
  std::vector<Point> sites;
  const std::vector<double> col = green_exact_column(d, params.beta, Domain::box(Point(d), box), x, &sites);
  rep.min_inner = kInf;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const int m = sites[i].sup_norm();
    if (m <= n) {
      rep.min_inner = std::min(rep.min_inner, col[i]);
      rep.max_inner = std::max(rep.max_inner, col[i]);
    }
    if (m <= rep.outer) rep.max_outer = std::max(rep.max_outer, col[i]);
  }
  rep.ratio = rep.max_inner / rep.min_inner;
  rep.ratio_outer = rep.max_outer / rep.min_inner;
  return rep;
}

}  // namespace wsaw
