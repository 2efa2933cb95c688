#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsaw/enclosure.hpp"
#include "wsaw/enumerate.hpp"
#include "wsaw/rng.hpp"

namespace wsaw {

/// Outcome of one inequality check. `lhs` and `rhs` are the two sides as
/// stated; the verdict and margin come from the decision quantities in
/// `details` (for Simon-Lieb, the difference G^Lambda - G^S against the exit
/// sum, which cancels the common walks exactly).
struct VerdictReport {
  std::string check;
  Verdict verdict = Verdict::Inconclusive;
  Enclosure lhs;
  Enclosure rhs;
  double margin = 0.0;  // signed certified gap; > 0 when Holds
  nlohmann::json instance;
  nlohmann::json details = nlohmann::json::object();
  std::string note;
};

nlohmann::json to_json(const Enclosure& e);
nlohmann::json to_json(const VerdictReport& r);
nlohmann::json instance_record(const ModelParams& params);

/// G^Lambda(0,x) <= G^S(0,x) + sum_{y in S, z in Lambda\S, y~z} G^S(0,y) beta G^Lambda(z,x).
VerdictReport check_simon_lieb_upper(const ModelParams& params, const Domain& s, const Domain& domain,
                                     const Point& x, int n, Workspace& ws);

/// G^Lambda(0,x) >= G^S(0,x) + (exit sum) - lambda sum_{u in S} E(u) G^Lambda(u,x).
VerdictReport check_simon_lieb_reversed(const ModelParams& params, const Domain& s, const Domain& domain,
                                        const Point& x, int n, Workspace& ws);

struct SandwichReport {
  int d = 0;
  double lambda = 0.0;
  std::size_t trials = 0;
  int max_len = 0;
  std::size_t violations = 0;        // double precision, 1e-12 relative tolerance
  std::size_t exact_violations = 0;  // exact rational arithmetic
  std::size_t upper_equalities = 0;  // rho(concat) == upper exactly
  double min_lower_gap = kInf;       // min rho(concat) - lower
  double min_upper_gap = kInf;       // min upper - rho(concat)
  Verdict verdict = Verdict::Holds;
};

/// Random triples (w1, bridging edge, w2) checked against the weight sandwich.
SandwichReport check_weight_sandwich(const ModelParams& params, std::size_t trials, int max_len,
                                     const RandomSource& rng);

struct BootstrapRow {
  int n = 0;
  Enclosure phi;            // phi(H_n)
  double phi_threshold = 0.0;
  Verdict phi_verdict = Verdict::Inconclusive;
  Enclosure g_max;          // max over x_1 = -n of G^{H_n}(0,x)
  double g_threshold = 0.0; // C / (1 v n)^{d-1}
  Verdict g_verdict = Verdict::Inconclusive;
  double c_min = 0.0;       // every C > c_min makes the pointwise condition hold here
};

struct BootstrapReport {
  double c = 0.0;
  std::vector<BootstrapRow> rows;
  Verdict verdict = Verdict::Inconclusive;
  double c_min = 0.0;
};

BootstrapReport check_bootstrap_conditions(const ModelParams& params, double c, int nmax, int n,
                                           Workspace& ws);

/// G(0,x) <= phi(Lambda_L)^k max{G(y,x) : y notin Lambda_L(x)}, k = floor(|x|/(L+1)) - 1.
VerdictReport check_iterated_decay(const ModelParams& params, const Point& x, int n, Workspace& ws,
                                   int kmax = 8);

struct HarnackReport {
  int n = 0;
  double alpha = 0.0;
  int outer = 0;  // floor((1 + alpha) n)
  Point x;
  int box = 0;
  double min_inner = 0.0;
  double max_inner = 0.0;
  double max_outer = 0.0;
  double ratio = 1.0;        // max_inner / min_inner
  double ratio_outer = 1.0;  // max_outer / min_inner
};

/// Random-walk Green ratios max/min of G(u, x) over u in Lambda_n, from an exact
/// solve on the ambient box Lambda_R. lambda must be 0.
HarnackReport measure_harnack_ratio(const ModelParams& params, int n, double alpha, const Point& x, int box);

/// Overall verdict of several: Fails dominates, then Inconclusive.
Verdict combine(const std::vector<Verdict>& verdicts);

}  // namespace wsaw
