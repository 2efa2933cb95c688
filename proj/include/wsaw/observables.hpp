#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wsaw/enclosure.hpp"
#include "wsaw/enumerate.hpp"

namespace wsaw {

/// 1 - e^{-2}: the epsilon for which L_beta(epsilon) is the sharp length.
double sharp_length_epsilon();

struct SharpLengthResult {
  enum class Status { Found, ExceedsKmax, Inconclusive };
  Status status = Status::ExceedsKmax;
  /// First k with upper(phi(Lambda_k)) <= threshold (Found), or the first k
  /// whose enclosure straddles the threshold (Inconclusive).
  int value = 0;
  double threshold = 0.0;
  std::vector<std::pair<int, Enclosure>> phi_trace;

  bool decided() const { return status == Status::Found; }
};

std::string to_string(SharpLengthResult::Status s);

/// inf{k >= 1 : phi(Lambda_k) <= e^{-2}} scanned over k = 1..kmax.
SharpLengthResult sharp_length(const ModelParams& params, int kmax, int n, Workspace* ws = nullptr);
/// inf{k >= 1 : phi(Lambda_k) <= 1 - epsilon}.
SharpLengthResult sharp_length_eps(const ModelParams& params, double epsilon, int kmax, int n,
                                   Workspace* ws = nullptr);

/// Least-squares fit of -log G(0, n e1) against n. An estimate, not a bound.
struct XiFit {
  std::vector<int> n_list;
  std::vector<double> g_lower;
  std::vector<double> rate;       // -(1/n) log G(0, n e1)
  std::vector<double> residuals;  // of the linear fit
  double slope = 0.0;             // estimate of 1/xi
  double intercept = 0.0;
  double xi = 0.0;
};

XiFit correlation_length_estimate(const ModelParams& params, const std::vector<int>& n_list, int n,
                                  Workspace* ws = nullptr);

struct ErrorAmplitudeResult {
  std::vector<std::pair<Point, Enclosure>> per_u;  // u reached from 0 inside S, sorted
  /// Contribution of every u not in per_u (not reached within the cutoff).
  Enclosure remainder;
  Enclosure total;
};

/// E(u) = sum_{y in S, z in Lambda\S, y~z} G^S(0,u) G^S(u,y) beta G^Lambda(z,u)
/// and its sum over u in S.
ErrorAmplitudeResult error_amplitude(const ModelParams& params, const Domain& s, const Domain& domain, int n,
                                     Workspace& ws);

/// A_n = {x : x_1 = |x| = n}.
std::vector<Point> face_set(int d, int n);

struct AvgLowerReport {
  int n = 0;
  double epsilon = 0.0;
  std::size_t face_size = 0;
  Enclosure avg_halfspace;  // (1/|A_n|) sum_{x in A_n} G^H(0,x)
  Enclosure avg_box_face;   // (1/|A_n|) sum_{x in A_n} G^{Lambda_n}(0,x)
  Enclosure phi_n;          // phi(Lambda_n)
  double chain_value = 0.0; // (1 - epsilon) / (2 d beta |A_n|)
  /// Whether n < L_beta(epsilon), decided from phi(Lambda_k), k = 1..n.
  Verdict precondition = Verdict::Inconclusive;
  /// The implication "n < L_beta(eps) => avg >= chain value".
  Verdict verdict = Verdict::Inconclusive;
  bool vacuous = false;
  std::string note;
};

AvgLowerReport halfspace_avg_lower_check(const ModelParams& params, int n, double epsilon, int cutoff,
                                         Workspace* ws = nullptr);

/// Upper bound on sum_y G^D(x, y) valid for every domain D (requires the
/// counting tail ratio (2d - lambda) beta < 1): 1 + 2d beta / (1 - q).
double mass_bound(const ModelParams& params);

}  // namespace wsaw
