#include "wsaw/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wsaw/enumerate.hpp"
#include "wsaw/mcsampler.hpp"
#include "wsaw/observables.hpp"
#include "wsaw/srw.hpp"
#include "wsaw/verifier.hpp"

namespace wsaw::cli {

namespace {

using json = nlohmann::json;

struct Flags {
  int d = 2;
  double lambda = 0.0;
  double beta = 0.0;
  std::string beta_grid;
  std::string domain = "all";
  std::string s_domain;
  std::string lambda_domain;
  std::string from = "0";
  std::string to = "0";
  std::string x;
  std::string u;
  std::string v;
  std::string start = "0";
  std::string n_list = "1,2,3,4";
  std::string emit = "chi,L,xi";
  std::string strategy = "uniform";
  std::string format = "json";
  std::string output;
  int cutoff = 12;
  int window = 4;
  int kmax = 8;
  int n = 1;
  int nmax = 3;
  int max_len = 12;
  int horizon = 100;
  int steps = 1000;
  int box_l = 10;
  double eps = 0.5;
  double c = 1.0;
  double alpha = 1.0;
  std::size_t trials = 1000;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct Report {
  json instance;
  json result;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool fails = false;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // shortest representation that reads back to the same double
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ModelParams params_of(const Flags& f) {
  ModelParams p{f.d, f.lambda, f.beta};
  p.validate();
  return p;
}

Point point_of(const std::string& text, int d) {
  if (text == "0") return Point(d);
  Point p = parse_point(text);
  if (p.dim() != d) throw Error("point '" + text + "' has dimension " + std::to_string(p.dim()) + ", expected " + std::to_string(d));
  return p;
}

json base_instance(const Flags& f) {
  json j{{"d", f.d}, {"lambda", f.lambda}, {"beta", f.beta}};
  return j;
}

void require_cutoff(int n) {
  if (n < 0) throw Error("--N must be >= 0");
}

std::vector<int> int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error("invalid integer list '" + text + "'");
    }
  }
  return out;
}

std::vector<double> beta_grid(const std::string& text) {
  double a, b, step;
  char c1, c2;
  std::stringstream ss(text);
  if (!(ss >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
    throw Error("invalid --beta-grid '" + text + "' (expected start:stop:step)");
  }
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    // snap to 12 significant digits so 0.02:0.22:0.02 yields 0.2 rather than 0.19999999999999998
    const double v = a + static_cast<double>(i) * step;
    const double scale = v == 0.0 ? 1.0 : std::pow(10.0, 11 - std::floor(std::log10(std::abs(v))));
    out.push_back(std::round(v * scale) / scale);
  }
  return out;
}

void add_enclosure_csv(Report& r, const Enclosure& e) {
  r.csv_header = {"lower", "upper", "N", "rigorous"};
  r.csv_rows.push_back({num(e.lower), num(e.upper), std::to_string(e.truncation_n), e.rigorous ? "true" : "false"});
}

json sharp_json(const SharpLengthResult& s) {
  json trace = json::array();
  for (const auto& [k, e] : s.phi_trace) trace.push_back(json{{"k", k}, {"phi", to_json(e)}});
  return json{{"status", to_string(s.status)}, {"value", s.value}, {"threshold", s.threshold}, {"phi_trace", trace}};
}

void add_verdict_csv(Report& r, const VerdictReport& v) {
  r.csv_header = {"check", "x", "verdict", "margin", "lhs_lower", "lhs_upper", "rhs_lower", "rhs_upper"};
  const std::string x = v.instance.contains("x") ? Point(v.instance["x"].get<std::vector<int>>()).to_string() : "";
  r.csv_rows.push_back({v.check, x, to_string(v.verdict), num(v.margin), num(v.lhs.lower), num(v.lhs.upper),
                        num(v.rhs.lower), num(v.rhs.upper)});
  if (v.verdict == Verdict::Fails) r.fails = true;
}

// ------------------------------------------------------------ commands

Report cmd_green(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const Domain dom = parse_domain(f.domain, f.d);
  const Point a = point_of(f.from, f.d), b = point_of(f.to, f.d);
  const Enclosure e = green(p, dom, a, b, f.cutoff, &ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"domain", dom.to_string()}, {"from", a.coords()}, {"to", b.coords()}, {"N", f.cutoff}});
  r.result = to_json(e);
  add_enclosure_csv(r, e);
  return r;
}

Report cmd_phi(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const Domain s = parse_domain(f.s_domain.empty() ? f.domain : f.s_domain, f.d);
  const Enclosure e = phi(p, s, f.cutoff, &ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"S", s.to_string()}, {"N", f.cutoff}});
  r.result = to_json(e);
  add_enclosure_csv(r, e);
  return r;
}

Report cmd_chi(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const Enclosure e = chi_truncated(p, f.cutoff, &ws);
  Report r;
  r.instance = base_instance(f);
  r.instance["N"] = f.cutoff;
  r.result = to_json(e);
  add_enclosure_csv(r, e);
  return r;
}

Report cmd_bubble(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const BubbleBound b = bubble_truncated(p, f.cutoff, f.window, &ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"N", f.cutoff}, {"R", f.window}});
  r.result = json{{"window_lower", b.window_lower}, {"lower", b.lower}, {"upper", jnum(b.upper)}, {"rigorous", b.rigorous}};
  r.csv_header = {"window_lower", "lower", "upper", "rigorous"};
  r.csv_rows.push_back({num(b.window_lower), num(b.lower), num(b.upper), b.rigorous ? "true" : "false"});
  return r;
}

Report cmd_sharp_length(const Flags& f, Workspace& ws, bool with_eps) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const SharpLengthResult s =
      with_eps ? sharp_length_eps(p, f.eps, f.kmax, f.cutoff, &ws) : sharp_length(p, f.kmax, f.cutoff, &ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"kmax", f.kmax}, {"N", f.cutoff}});
  if (with_eps) r.instance["eps"] = f.eps;
  r.result = sharp_json(s);
  r.csv_header = {"k", "phi_lower", "phi_upper", "threshold", "status", "value"};
  for (const auto& [k, e] : s.phi_trace) {
    r.csv_rows.push_back({std::to_string(k), num(e.lower), num(e.upper), num(s.threshold), to_string(s.status),
                          std::to_string(s.value)});
  }
  return r;
}

Report cmd_xi(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const XiFit fit = correlation_length_estimate(p, int_list(f.n_list), f.cutoff, &ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"n_list", fit.n_list}, {"N", f.cutoff}});
  r.result = json{{"slope", fit.slope},     {"intercept", fit.intercept}, {"xi", jnum(fit.xi)},
                  {"g_lower", fit.g_lower}, {"rate", fit.rate},           {"residuals", fit.residuals},
                  {"kind", "least-squares estimate, not a bound"}};
  r.csv_header = {"n", "g_lower", "rate", "residual", "slope", "xi"};
  for (std::size_t i = 0; i < fit.n_list.size(); ++i) {
    r.csv_rows.push_back({std::to_string(fit.n_list[i]), num(fit.g_lower[i]), num(fit.rate[i]),
                          num(fit.residuals[i]), num(fit.slope), num(fit.xi)});
  }
  return r;
}

Report cmd_error_amplitude(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const Domain s = parse_domain(f.s_domain, f.d);
  const Domain l = parse_domain(f.lambda_domain, f.d);
  const ErrorAmplitudeResult ea = error_amplitude(p, s, l, f.cutoff, ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"S", s.to_string()}, {"Lambda", l.to_string()}, {"N", f.cutoff}});
  json per = json::array();
  r.csv_header = {"u", "lower", "upper"};
  for (const auto& [u, e] : ea.per_u) {
    per.push_back(json{{"u", u.coords()}, {"E", to_json(e)}});
    r.csv_rows.push_back({u.to_string(), num(e.lower), num(e.upper)});
  }
  r.csv_rows.push_back({"remainder", num(ea.remainder.lower), num(ea.remainder.upper)});
  r.csv_rows.push_back({"total", num(ea.total.lower), num(ea.total.upper)});
  r.result = json{{"per_u", per}, {"remainder", to_json(ea.remainder)}, {"total", to_json(ea.total)}};
  return r;
}

Report cmd_sl(const Flags& f, Workspace& ws, bool reversed) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const Domain s = parse_domain(f.s_domain, f.d);
  const Domain l = parse_domain(f.lambda_domain, f.d);
  std::vector<Point> xs;
  if (f.x == "all") {
    if (!l.is_finite()) throw Error("--x all needs a finite Lambda");
    xs = l.points();
  } else {
    xs.push_back(point_of(f.x.empty() ? "0" : f.x, f.d));
  }
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"S", s.to_string()}, {"Lambda", l.to_string()}, {"N", f.cutoff}, {"x", f.x}});
  json reports = json::array();
  std::vector<Verdict> verdicts;
  for (const Point& x : xs) {
    const VerdictReport v = reversed ? check_simon_lieb_reversed(p, s, l, x, f.cutoff, ws)
                                     : check_simon_lieb_upper(p, s, l, x, f.cutoff, ws);
    reports.push_back(to_json(v));
    add_verdict_csv(r, v);
    verdicts.push_back(v.verdict);
  }
  r.result = xs.size() == 1 ? reports[0] : json{{"verdict", to_string(combine(verdicts))}, {"reports", reports}};
  return r;
}

Report cmd_weights(const Flags& f) {
  const ModelParams p = params_of(f);
  const SandwichReport s = check_weight_sandwich(p, f.trials, f.max_len, RandomSource{f.seed});
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"trials", f.trials}, {"max_len", f.max_len}, {"seed", f.seed}, {"rng", RandomSource::algorithm}});
  r.result = json{{"verdict", to_string(s.verdict)},         {"violations", s.violations},
                  {"exact_violations", s.exact_violations}, {"upper_equalities", s.upper_equalities},
                  {"min_lower_gap", jnum(s.min_lower_gap)}, {"min_upper_gap", jnum(s.min_upper_gap)}};
  r.csv_header = {"verdict", "trials", "violations", "exact_violations", "upper_equalities"};
  r.csv_rows.push_back({to_string(s.verdict), std::to_string(s.trials), std::to_string(s.violations),
                        std::to_string(s.exact_violations), std::to_string(s.upper_equalities)});
  r.fails = s.verdict == Verdict::Fails;
  return r;
}

Report cmd_bootstrap(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const BootstrapReport b = check_bootstrap_conditions(p, f.c, f.nmax, f.cutoff, ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"C", f.c}, {"nmax", f.nmax}, {"N", f.cutoff}});
  json rows = json::array();
  r.csv_header = {"n", "phi_lower", "phi_upper", "phi_threshold", "phi_verdict", "g_lower", "g_upper", "g_threshold",
                  "g_verdict", "c_min"};
  for (const BootstrapRow& row : b.rows) {
    rows.push_back(json{{"n", row.n},
                        {"phi", to_json(row.phi)},
                        {"phi_threshold", row.phi_threshold},
                        {"phi_verdict", to_string(row.phi_verdict)},
                        {"g_max", to_json(row.g_max)},
                        {"g_threshold", row.g_threshold},
                        {"g_verdict", to_string(row.g_verdict)},
                        {"c_min", jnum(row.c_min)}});
    r.csv_rows.push_back({std::to_string(row.n), num(row.phi.lower), num(row.phi.upper), num(row.phi_threshold),
                          to_string(row.phi_verdict), num(row.g_max.lower), num(row.g_max.upper),
                          num(row.g_threshold), to_string(row.g_verdict), num(row.c_min)});
  }
  r.result = json{{"verdict", to_string(b.verdict)}, {"c_min", jnum(b.c_min)}, {"rows", rows}};
  r.fails = b.verdict == Verdict::Fails;
  return r;
}

Report cmd_iterated(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const Point x = point_of(f.x.empty() ? "0" : f.x, f.d);
  const VerdictReport v = check_iterated_decay(p, x, f.cutoff, ws, f.kmax);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"x", x.coords()}, {"N", f.cutoff}, {"kmax", f.kmax}});
  r.result = to_json(v);
  add_verdict_csv(r, v);
  return r;
}

Report cmd_avg_lower(const Flags& f, Workspace& ws) {
  const ModelParams p = params_of(f);
  require_cutoff(f.cutoff);
  const AvgLowerReport a = halfspace_avg_lower_check(p, f.n, f.eps, f.cutoff, &ws);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"n", f.n}, {"eps", f.eps}, {"N", f.cutoff}});
  r.result = json{{"verdict", to_string(a.verdict)},
                  {"precondition", to_string(a.precondition)},
                  {"vacuous", a.vacuous},
                  {"face_size", a.face_size},
                  {"avg_halfspace", to_json(a.avg_halfspace)},
                  {"avg_box_face", to_json(a.avg_box_face)},
                  {"phi_n", to_json(a.phi_n)},
                  {"chain_value", jnum(a.chain_value)},
                  {"note", a.note}};
  r.csv_header = {"n", "verdict", "precondition", "avg_lower", "avg_upper", "chain_value"};
  r.csv_rows.push_back({std::to_string(a.n), to_string(a.verdict), to_string(a.precondition),
                        num(a.avg_halfspace.lower), num(a.avg_halfspace.upper), num(a.chain_value)});
  r.fails = a.verdict == Verdict::Fails;
  return r;
}

Report cmd_srw_green(const Flags& f) {
  if (!(f.beta >= 0.0)) throw Error("--beta must be >= 0");
  const Domain dom = parse_domain(f.domain, f.d);
  Report r;
  r.instance = json{{"d", f.d}, {"beta", f.beta}, {"domain", dom.to_string()}};
  const Point b = point_of(f.to, f.d);
  std::vector<Point> sites;
  const std::vector<double> col = green_exact_column(f.d, f.beta, dom, b, &sites);
  r.instance["to"] = b.coords();
  json values = json::array();
  r.csv_header = {"x", "G"};
  for (std::size_t i = 0; i < sites.size(); ++i) {
    values.push_back(json{{"x", sites[i].coords()}, {"G", col[i]}});
    r.csv_rows.push_back({sites[i].to_string(), num(col[i])});
  }
  r.result = json{{"column", values}};
  return r;
}

Report cmd_srw_ruin(const Flags& f) {
  const std::vector<double> curve = gambler_ruin_curve(f.d, f.n, f.steps);
  Report r;
  r.instance = json{{"d", f.d}, {"n", f.n}, {"steps", f.steps}};
  json pts = json::array();
  r.csv_header = {"steps", "P_exit_by"};
  for (long k = 1; k <= f.steps; k *= 10) {
    pts.push_back(json{{"steps", k}, {"p", curve[static_cast<std::size_t>(k)]}});
    r.csv_rows.push_back({std::to_string(k), num(curve[static_cast<std::size_t>(k)])});
  }
  if (f.steps > 0 && r.csv_rows.back()[0] != std::to_string(f.steps)) {
    pts.push_back(json{{"steps", f.steps}, {"p", curve.back()}});
    r.csv_rows.push_back({std::to_string(f.steps), num(curve.back())});
  }
  const bool monotone = std::is_sorted(curve.begin(), curve.end());
  r.result = json{{"value", curve.back()}, {"monotone", monotone}, {"curve", pts}};
  return r;
}

Report cmd_srw_halfspace(const Flags& f) {
  const Point x = point_of(f.x.empty() ? "0" : f.x, f.d);
  const double v = halfspace_visits(f.d, x, f.steps);
  Report r;
  r.instance = json{{"d", f.d}, {"x", x.coords()}, {"steps", f.steps}};
  r.result = json{{"visits", v}};
  r.csv_header = {"x", "visits"};
  r.csv_rows.push_back({x.to_string(), num(v)});
  return r;
}

Report cmd_srw_coupling(const Flags& f) {
  const Point u = point_of(f.u.empty() ? "0" : f.u, f.d);
  const Point v = point_of(f.v.empty() ? "0" : f.v, f.d);
  const auto table = coupling_merge_stats(f.d, u, v, f.horizon, f.trials, RandomSource{f.seed}, f.threads);
  Report r;
  r.instance = json{{"d", f.d},           {"u", u.coords()},   {"v", v.coords()},
                    {"horizon", f.horizon}, {"trials", f.trials}, {"seed", f.seed}, {"rng", RandomSource::algorithm}};
  json rows = json::array();
  r.csv_header = {"n", "p_not_merged", "std_error"};
  for (const SurvivalPoint& s : table) {
    rows.push_back(json{{"n", s.n}, {"p", s.p}, {"std_error", s.std_error}});
    r.csv_rows.push_back({std::to_string(s.n), num(s.p), num(s.std_error)});
  }
  r.result = json{{"survival", rows}};
  return r;
}

Report cmd_srw_exit(const Flags& f) {
  const Point s = point_of(f.start, f.d);
  const McMean m = exit_time_mean(f.d, f.box_l, s, f.trials, RandomSource{f.seed}, f.threads);
  Report r;
  r.instance = json{{"d", f.d}, {"L", f.box_l}, {"start", s.coords()}, {"trials", f.trials}, {"seed", f.seed},
                    {"rng", RandomSource::algorithm}};
  r.result = json{{"mean", m.mean}, {"std_error", m.std_error}, {"ceiling_9dL2", 9.0 * f.d * f.box_l * f.box_l}};
  r.csv_header = {"mean", "std_error", "ceiling_9dL2"};
  r.csv_rows.push_back({num(m.mean), num(m.std_error), num(9.0 * f.d * f.box_l * f.box_l)});
  return r;
}

Report cmd_mc(const Flags& f) {
  const ModelParams p = params_of(f);
  const Domain dom = parse_domain(f.domain, f.d);
  const Point a = point_of(f.from, f.d), b = point_of(f.to, f.d);
  const McStrategy strat = parse_strategy(f.strategy);
  const McEstimate e = estimate_green_mc(p, dom, a, b, f.nmax, f.samples, RandomSource{f.seed}, strat, f.threads);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"domain", dom.to_string()}, {"from", a.coords()}, {"to", b.coords()}, {"nmax", f.nmax},
                         {"samples", f.samples}, {"seed", f.seed}, {"strategy", to_string(strat)},
                         {"rng", RandomSource::algorithm}});
  json per = json::array();
  r.csv_header = {"n", "contribution", "std_error"};
  for (const McLength& l : e.per_length) {
    per.push_back(json{{"n", l.n}, {"contribution", l.contribution}, {"std_error", l.std_error}});
    r.csv_rows.push_back({std::to_string(l.n), num(l.contribution), num(l.std_error)});
  }
  r.csv_rows.push_back({"total", num(e.mean), num(e.std_error)});
  r.result = json{{"mean", e.mean}, {"std_error", e.std_error}, {"samples_per_length", e.samples}, {"per_length", per}};
  return r;
}

Report cmd_harnack(const Flags& f) {
  const ModelParams p = params_of(f);
  const Point x = point_of(f.x.empty() ? "0" : f.x, f.d);
  const HarnackReport h = measure_harnack_ratio(p, f.n, f.alpha, x, f.window);
  Report r;
  r.instance = base_instance(f);
  r.instance.update(json{{"n", f.n}, {"alpha", f.alpha}, {"x", x.coords()}, {"R", f.window}});
  r.result = json{{"min_inner", h.min_inner}, {"max_inner", h.max_inner}, {"max_outer", h.max_outer},
                  {"ratio", jnum(h.ratio)},    {"ratio_outer", jnum(h.ratio_outer)}, {"outer", h.outer}};
  r.csv_header = {"n", "outer", "min_inner", "max_inner", "max_outer", "ratio", "ratio_outer"};
  r.csv_rows.push_back({std::to_string(h.n), std::to_string(h.outer), num(h.min_inner), num(h.max_inner),
                        num(h.max_outer), num(h.ratio), num(h.ratio_outer)});
  return r;
}

Report cmd_scan(const Flags& f, Workspace& ws) {
  require_cutoff(f.cutoff);
  const std::vector<double> grid = beta_grid(f.beta_grid);
  std::vector<std::string> emit;
  {
    std::stringstream ss(f.emit);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item != "chi" && item != "L" && item != "xi") throw Error("--emit accepts chi, L, xi; got '" + item + "'");
      emit.push_back(item);
    }
  }
  auto wants = [&](const char* k) { return std::find(emit.begin(), emit.end(), k) != emit.end(); };
  Report r;
  r.instance = json{{"d", f.d}, {"lambda", f.lambda}, {"beta_grid", f.beta_grid}, {"N", f.cutoff}, {"kmax", f.kmax},
                    {"n_list", f.n_list}, {"emit", f.emit}};
  r.csv_header = {"beta"};
  if (wants("chi")) r.csv_header.insert(r.csv_header.end(), {"chi_lower", "chi_upper", "chi_rigorous"});
  if (wants("L")) r.csv_header.insert(r.csv_header.end(), {"L_status", "L_value"});
  if (wants("xi")) r.csv_header.insert(r.csv_header.end(), {"xi", "xi_slope"});
  json rows = json::array();
  for (double beta : grid) {
    const ModelParams p{f.d, f.lambda, beta};
    p.validate();
    json row{{"beta", beta}};
    std::vector<std::string> csv{num(beta)};
    if (wants("chi")) {
      const Enclosure e = chi_truncated(p, f.cutoff, &ws);
      row["chi"] = to_json(e);
      csv.insert(csv.end(), {num(e.lower), num(e.upper), e.rigorous ? "true" : "false"});
    }
    if (wants("L")) {
      const SharpLengthResult s = sharp_length(p, f.kmax, f.cutoff, &ws);
      row["L"] = json{{"status", to_string(s.status)}, {"value", s.value}};
      csv.insert(csv.end(), {to_string(s.status), std::to_string(s.value)});
    }
    if (wants("xi")) {
      try {
        const XiFit fit = correlation_length_estimate(p, int_list(f.n_list), f.cutoff, &ws);
        row["xi"] = json{{"xi", jnum(fit.xi)}, {"slope", fit.slope}};
        csv.insert(csv.end(), {num(fit.xi), num(fit.slope)});
      } catch (const Error& e) {
        row["xi"] = json{{"error", e.what()}};
        csv.insert(csv.end(), {"nan", "nan"});
      }
    }
    rows.push_back(row);
    r.csv_rows.push_back(csv);
  }
  r.result = json{{"rows", rows},
                  {"beta_c_bracket", "1/(2d) <= beta_c <= 1/mu_c(d), mu_c the connective constant"}};
  return r;
}

// ------------------------------------------------------------ plumbing

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--d", f.d, "dimension")->check(CLI::PositiveNumber);
  app->add_option("--lambda", f.lambda, "interaction strength in [0,1]");
  app->add_option("--beta", f.beta, "fugacity >= 0");
  app->add_option("--beta-grid", f.beta_grid, "start:stop:step");
  app->add_option("--domain", f.domain, "domain spec, e.g. box:3, halfspace:0, set:0,0;1,0");
  app->add_option("--S", f.s_domain, "inner domain S");
  app->add_option("--Lambda", f.lambda_domain, "outer domain Lambda");
  app->add_option("--from", f.from, "start point, e.g. 0,0");
  app->add_option("--to", f.to, "end point");
  app->add_option("--x", f.x, "target point (or 'all' for Simon-Lieb checks)");
  app->add_option("--u", f.u, "first coupling start");
  app->add_option("--v", f.v, "second coupling start");
  app->add_option("--start", f.start, "start point for exit times");
  app->add_option("--N", f.cutoff, "length cutoff");
  app->add_option("--R", f.window, "spatial window / ambient box radius");
  app->add_option("--kmax", f.kmax, "largest box scanned for the sharp length");
  app->add_option("--n", f.n, "scale n");
  app->add_option("--nmax", f.nmax, "largest n (bootstrap) or walk length (mc)");
  app->add_option("--n-list", f.n_list, "comma separated distances for xi");
  app->add_option("--eps", f.eps, "epsilon in (0,1)");
  app->add_option("--C", f.c, "bootstrap constant");
  app->add_option("--alpha", f.alpha, "Harnack enlargement");
  app->add_option("--L", f.box_l, "exit box scale L (exits Lambda_{L-1})");
  app->add_option("--max-len", f.max_len, "longest walk in sandwich trials");
  app->add_option("--horizon", f.horizon, "coupling horizon");
  app->add_option("--steps", f.steps, "random-walk steps");
  app->add_option("--trials", f.trials, "Monte Carlo trials");
  app->add_option("--samples", f.samples, "Monte Carlo samples per length");
  app->add_option("--strategy", f.strategy, "uniform|nonreversing");
  app->add_option("--seed", f.seed, "PRNG seed");
  app->add_option("--threads", f.threads, "worker threads (0 = default)");
  app->add_option("--emit", f.emit, "scan columns: chi,L,xi");
  app->add_option("--format", f.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("-o,--output", f.output, "report path (default stdout)");
}

std::string render(const Report& r, const std::string& command, const Flags& f, double seconds) {
  if (f.format == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.csv_header.size(); ++i) os << (i ? "," : "") << r.csv_header[i];
    os << "\n";
    for (const auto& row : r.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["instance"] = r.instance;
  j["result"] = r.result;
  j["run"] = json{{"wall_time_s", seconds}, {"threads", f.threads}};
  return j.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wsaw: weakly self-avoiding walk laboratory"};
  app.require_subcommand(1);
  Flags f;
  std::string command;
  std::map<std::string, std::function<Report(Workspace&)>> table;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& full, const std::string& help,
                  std::function<Report(Workspace&)> fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_common(sub, f);
    sub->callback([&command, full] { command = full; });
    table[full] = std::move(fn);
  };

  leaf(&app, "green", "green", "truncated two-point function with enclosure", [&](Workspace& ws) { return cmd_green(f, ws); });
  leaf(&app, "phi", "phi", "phi_beta(S)", [&](Workspace& ws) { return cmd_phi(f, ws); });
  leaf(&app, "chi", "chi", "susceptibility enclosure", [&](Workspace& ws) { return cmd_chi(f, ws); });
  leaf(&app, "bubble", "bubble", "bubble diagram bounds", [&](Workspace& ws) { return cmd_bubble(f, ws); });
  leaf(&app, "sharp-length", "sharp-length", "sharp length L_beta (or L_beta(eps) with --eps)", [&](Workspace& ws) {
    return cmd_sharp_length(f, ws, app.get_subcommand("sharp-length")->count("--eps") > 0);
  });
  leaf(&app, "xi", "xi", "correlation length fit", [&](Workspace& ws) { return cmd_xi(f, ws); });
  leaf(&app, "error-amplitude", "error-amplitude", "error amplitude of the reversed Simon-Lieb inequality",
       [&](Workspace& ws) { return cmd_error_amplitude(f, ws); });

  CLI::App* verify = app.add_subcommand("verify", "inequality checks");
  verify->require_subcommand(1);
  leaf(verify, "sl-upper", "verify sl-upper", "Simon-Lieb inequality", [&](Workspace& ws) { return cmd_sl(f, ws, false); });
  leaf(verify, "sl-reversed", "verify sl-reversed", "reversed Simon-Lieb inequality",
       [&](Workspace& ws) { return cmd_sl(f, ws, true); });
  leaf(verify, "weights", "verify weights", "weight sandwich on random concatenations", [&](Workspace&) { return cmd_weights(f); });
  leaf(verify, "bootstrap", "verify bootstrap", "half-space bootstrap conditions",
       [&](Workspace& ws) { return cmd_bootstrap(f, ws); });
  leaf(verify, "iterated-decay", "verify iterated-decay", "iterated Simon-Lieb decay bound",
       [&](Workspace& ws) { return cmd_iterated(f, ws); });
  leaf(verify, "avg-lower", "verify avg-lower", "averaged half-space lower bound",
       [&](Workspace& ws) { return cmd_avg_lower(f, ws); });

  CLI::App* srw = app.add_subcommand("srw", "simple random walk references");
  srw->require_subcommand(1);
  leaf(srw, "green", "srw green", "exact Green column by linear solve", [&](Workspace&) { return cmd_srw_green(f); });
  leaf(srw, "ruin", "srw ruin", "gambler's ruin exit probability", [&](Workspace&) { return cmd_srw_ruin(f); });
  leaf(srw, "halfspace", "srw halfspace", "half-space visit counts", [&](Workspace&) { return cmd_srw_halfspace(f); });
  leaf(srw, "coupling", "srw coupling", "reflection coupling survival", [&](Workspace&) { return cmd_srw_coupling(f); });
  leaf(srw, "exit-time", "srw exit-time", "mean box exit time", [&](Workspace&) { return cmd_srw_exit(f); });

  leaf(&app, "mc", "mc", "Monte Carlo two-point function", [&](Workspace&) { return cmd_mc(f); });
  leaf(&app, "harnack", "harnack", "random-walk Harnack ratios", [&](Workspace&) { return cmd_harnack(f); });
  leaf(&app, "scan", "scan", "tabulate chi, L_beta and xi over a beta grid", [&](Workspace& ws) { return cmd_scan(f, ws); });

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' && !app.get_subcommand_no_throw(args.front())) {
    err << "error: unknown command '" << args.front() << "'\nRun with --help for the list of commands.\n";
    return kUsage;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    // prints help for --help, or the parse error
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  Report report;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Workspace ws(f.threads);
    report = table.at(command)(ws);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kIoError;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string text = render(report, command, f, seconds);
  if (f.output.empty()) {
    out << text;
  } else {
    std::ofstream file(f.output);
    if (!(file << text)) {
      err << "I/O error: cannot write report to '" << f.output << "'\n";
      return kIoError;
    }
  }
  return report.fails ? kFails : kOk;
}

}  // namespace wsaw::cli
