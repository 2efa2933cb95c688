#include "wsaw/observables.hpp"

#include <algorithm>
#include <cmath>

namespace wsaw {

double sharp_length_epsilon() { return 1.0 - std::exp(-2.0); }

std::string to_string(SharpLengthResult::Status s) {
  switch (s) {
    case SharpLengthResult::Status::Found:
      return "found";
    case SharpLengthResult::Status::ExceedsKmax:
      return "exceeds kmax";
    case SharpLengthResult::Status::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

SharpLengthResult sharp_length_eps(const ModelParams& params, double epsilon, int kmax, int n, Workspace* ws) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  if (kmax < 1) throw Error("kmax must be >= 1");
  std::unique_ptr<Workspace> holder;
  if (!ws) {
    holder = std::make_unique<Workspace>();
    ws = holder.get();
  }
  SharpLengthResult r;
  r.threshold = 1.0 - epsilon;
  const Point origin(params.d);
  for (int k = 1; k <= kmax; ++k) {
    const Enclosure e = phi(params, Domain::box(origin, k), n, ws);
    r.phi_trace.emplace_back(k, e);
    if (e.upper <= r.threshold) {
      r.status = SharpLengthResult::Status::Found;
      r.value = k;
      return r;
    }
    if (e.lower <= r.threshold) {
      r.status = SharpLengthResult::Status::Inconclusive;
      r.value = k;
      return r;
    }
  }
  r.status = SharpLengthResult::Status::ExceedsKmax;
  r.value = kmax;
  return r;
}

SharpLengthResult sharp_length(const ModelParams& params, int kmax, int n, Workspace* ws) {
  return sharp_length_eps(params, sharp_length_epsilon(), kmax, n, ws);
}

XiFit correlation_length_estimate(const ModelParams& params, const std::vector<int>& n_list, int n,
                                  Workspace* ws) {
  if (n_list.size() < 2) throw Error("correlation length fit needs at least two distances");
  std::unique_ptr<Workspace> holder;
  if (!ws) {
    holder = std::make_unique<Workspace>();
    ws = holder.get();
  }
  const GreenRow& row = ws->row(params, Domain::whole(params.d), Point(params.d), n);
  XiFit f;
  f.n_list = n_list;
  for (int k : n_list) {
    if (k < 1 || k > n) throw Error("every distance must satisfy 1 <= n <= N");
    const double g = row.lower_at(Point::unit(params.d, 0, k));
    if (!(g > 0.0)) throw Error("G lower bound is 0 at distance " + std::to_string(k) + "; raise N");
    f.g_lower.push_back(g);
    f.rate.push_back(-std::log(g) / k);
  }
  const double m = static_cast<double>(n_list.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const double x = n_list[i];
    const double y = -std::log(f.g_lower[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  if (den == 0.0) throw Error("correlation length fit needs distinct distances");
  f.slope = (m * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / m;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    f.residuals.push_back(-std::log(f.g_lower[i]) - (f.intercept + f.slope * n_list[i]));
  }
  f.xi = f.slope > 0.0 ? 1.0 / f.slope : kInf;
  return f;
}

double mass_bound(const ModelParams& params) {
  const double q = tail_ratio(params, 2 * params.d);
  if (!(q < 1.0)) return kInf;
  return 1.0 + 2.0 * params.d * params.beta / (1.0 - q);
}

ErrorAmplitudeResult error_amplitude(const ModelParams& params, const Domain& s, const Domain& domain, int n,
                                     Workspace& ws) {
  const Point origin(params.d);
  if (!s.contains(origin)) throw Error("error amplitude requires 0 in S");
  const double beta = params.beta;
  const double two_d = 2.0 * params.d;
  const GreenRow& r0 = ws.row(params, s, origin, n);
  const bool rigorous = r0.rigorous;
  ErrorAmplitudeResult res;
  CompensatedSum lo_total;
  CompensatedSum hi_total;
  for (std::size_t i = 0; i < r0.endpoints.size(); ++i) {
    const Point& u = r0.endpoints[i];
    if (!domain.contains(u)) throw Error("S must be contained in Lambda; " + u.to_string() + " is not");
    const Enclosure a{r0.lower[i], rigorous ? add_up(r0.lower_hi(i), r0.slack) : kInf, n, rigorous};
    Enclosure x{0.0, 0.0, n, rigorous};
    if (beta > 0.0) {
      const GreenRow& rs = ws.row(params, s, u, n);
      const GreenRow& rl = ws.row(params, domain, u, n);
      CompensatedSum lo, hi;
      double max_s_hi = 0.0;
      for (std::size_t j = 0; j < rs.endpoints.size(); ++j) {
        const Point& y = rs.endpoints[j];
        max_s_hi = std::max(max_s_hi, rs.lower_hi(j));
        for (const Point& z : neighbors(y)) {
          if (s.contains_unchecked(z) || !domain.contains_unchecked(z)) continue;
          lo.add(rs.lower[j] * rl.lower_at(z));
          hi.add(rs.lower_hi(j) * rl.lower_hi_at(z));
        }
      }
      x.lower = beta * lo.value();
      if (rigorous) {
        // unreached mass: at most 2d exit edges per y and 2d per z
        x.upper = beta * (hi.value() + two_d * rs.slack * rl.max_upper() + two_d * rl.slack * max_s_hi);
        x.upper *= 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
      } else {
        x.upper = kInf;
      }
    }
    const Enclosure e = a * x;
    res.per_u.emplace_back(u, e);
    lo_total.add(e.lower);
    hi_total.add(e.upper);
  }
  res.remainder = Enclosure{0.0, 0.0, n, rigorous};
  if (!rigorous) {
    res.remainder.upper = kInf;
  } else if (beta > 0.0 && r0.slack > 0.0) {
    // every unreached u: G^S(0,u) summed is <= slack, and the exit sum from u is
    // <= 2d beta * mass_bound * max G <= 2d beta * mass_bound^2
    const double mb = mass_bound(params);
    res.remainder.upper = r0.slack * two_d * beta * mb * mb;
  }
  res.total = Enclosure{lo_total.value(), rigorous ? hi_total.value() + res.remainder.upper : kInf, n, rigorous};
  return res;
}

std::vector<Point> face_set(int d, int n) {
  if (n < 1) throw Error("A_n needs n >= 1");
  Point lo(d), hi(d);
  lo[0] = hi[0] = n;
  for (int i = 1; i < d; ++i) {
    lo[i] = -n;
    hi[i] = n;
  }
  return BoundingBox{lo, hi}.points();
}

namespace {

Enclosure face_average(const GreenRow& row, const std::vector<Point>& face) {
  CompensatedSum lo, hi;
  for (const Point& x : face) {
    lo.add(row.lower_at(x));
    hi.add(row.lower_hi_at(x));
  }
  const double m = static_cast<double>(face.size());
  Enclosure e{lo.value() / m, kInf, row.n, row.rigorous};
  if (row.rigorous) e.upper = (hi.value() + row.slack) / m * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  return e;
}

}  // namespace

AvgLowerReport halfspace_avg_lower_check(const ModelParams& params, int n, double epsilon, int cutoff,
                                         Workspace* ws) {
  if (n < 1) throw Error("avg-lower check needs n >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  std::unique_ptr<Workspace> holder;
  if (!ws) {
    holder = std::make_unique<Workspace>();
    ws = holder.get();
  }
  const int d = params.d;
  const Point origin(d);
  AvgLowerReport r;
  r.n = n;
  r.epsilon = epsilon;
  const std::vector<Point> face = face_set(d, n);
  r.face_size = face.size();
  const double threshold = 1.0 - epsilon;

  r.precondition = Verdict::Holds;
  for (int k = 1; k <= n; ++k) {
    const Enclosure e = phi(params, Domain::box(origin, k), cutoff, ws);
    if (e.upper <= threshold) {
      r.precondition = Verdict::Fails;
      r.note = "precondition n < L_beta(eps) unmet: phi(Lambda_" + std::to_string(k) + ") <= 1 - eps";
      break;
    }
    if (e.lower <= threshold) r.precondition = Verdict::Inconclusive;
  }
  r.phi_n = phi(params, Domain::box(origin, n), cutoff, ws);

  r.avg_halfspace = face_average(ws->row(params, Domain::half_space(d, 0), origin, cutoff), face);
  r.avg_box_face = face_average(ws->row(params, Domain::box(origin, n), origin, cutoff), face);
  r.chain_value = params.beta > 0.0 ? threshold / (2.0 * d * params.beta * static_cast<double>(face.size())) : kInf;

  const Verdict main = decide_le(Enclosure::exact(r.chain_value, cutoff), r.avg_halfspace);
  switch (r.precondition) {
    case Verdict::Fails:
      r.verdict = Verdict::Holds;
      r.vacuous = true;
      break;
    case Verdict::Holds:
      r.verdict = main;
      break;
    case Verdict::Inconclusive:
      r.verdict = main == Verdict::Holds ? Verdict::Holds : Verdict::Inconclusive;
      if (main != Verdict::Holds) r.note = "precondition n < L_beta(eps) undecided at this cutoff";
      break;
  }
  return r;
}

}  // namespace wsaw
