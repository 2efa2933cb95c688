#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "wsaw/lattice.hpp"

namespace wsaw {

/// The (d, lambda, beta) triple every walk sum depends on.
struct ModelParams {
  int d = 2;
  double lambda = 0.0;
  double beta = 0.0;

  /// Throws Error unless d >= 1, lambda in [0,1], beta >= 0.
  void validate() const;
  /// 2d*beta < 1: the trivial count (2d)^n of length-n walks gives a summable tail.
  bool subcritical_by_counting() const { return 2.0 * d * beta < 1.0; }
};

/// A nearest-neighbour path gamma(0), ..., gamma(|gamma|) together with its
/// site occupancy counts. The zero-length walk is a valid walk.
class Walk {
 public:
  explicit Walk(const Point& start);
  /// Throws Error if consecutive sites are not neighbours or `sites` is empty.
  explicit Walk(const std::vector<Point>& sites);

  int length() const { return static_cast<int>(sites_.size()) - 1; }
  int dim() const { return sites_.front().dim(); }
  const std::vector<Point>& sites() const { return sites_; }
  const Point& front() const { return sites_.front(); }
  const Point& back() const { return sites_.back(); }
  const Point& operator[](int i) const { return sites_[static_cast<std::size_t>(i)]; }

  int occupancy(const Point& p) const;
  /// Number of coincidence pairs s < t with gamma(s) = gamma(t), i.e. sum_p C(m_p, 2).
  std::int64_t coincidence_pairs() const { return pairs_; }

  /// Appends `next`; throws Error if it is not adjacent to back().
  void push(const Point& next);
  void pop();

  Walk reversed() const;
  /// gamma1 o (yz) o gamma2 for y = back() of this walk and z = front() of tail.
  Walk concatenated(const Walk& tail) const;

  friend bool operator==(const Walk& a, const Walk& b) { return a.sites_ == b.sites_; }

 private:
  std::vector<Point> sites_;
  std::unordered_map<Point, int, PointHash> occ_;
  std::int64_t pairs_ = 0;
};

/// (1 - lambda)^k by repeated multiplication, so it is exact for exact scalar types.
template <typename T>
T one_minus_lambda_pow(const T& lambda, std::int64_t k) {
  T base = T(1) - lambda;
  T r(1);
  while (k > 0) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

/// rho(gamma) = prod_{s<t} (1 - lambda 1[gamma(s)=gamma(t)]) = (1-lambda)^{pairs}.
template <typename T = double>
T rho(const Walk& w, const T& lambda) {
  return one_minus_lambda_pow(lambda, w.coincidence_pairs());
}

/// Factor (1-lambda)^{occupancy(next)} with rho(w . next) = rho(w) * factor.
double extend_factor(const Walk& w, const Point& next, double lambda);

/// Number of pairs (i, j) with w1(i) = w2(j), 0 <= i <= |w1|, 0 <= j <= |w2|.
/// Counting j = 0 as well makes the sandwich valid for arbitrary triples; it
/// coincides with the j >= 1 count whenever w1 avoids w2's first site.
std::int64_t cross_coincidences(const Walk& w1, const Walk& w2);

template <typename T>
struct WeightBounds {
  T lower;
  T upper;
};

/// Bounds bracketing rho(w1 o (yz) o w2):
///   rho1 rho2 (1 - lambda I) <= rho(concat) <= rho1 rho2.
/// The lower value may be negative. Throws Error unless w1 ends next to w2's start.
template <typename T = double>
WeightBounds<T> split_weight_bounds(const Walk& w1, const Walk& w2, const T& lambda) {
  if (!adjacent(w1.back(), w2.front())) {
    throw Error("split_weight_bounds: w1 must end at y and w2 start at z with y ~ z");
  }
  const T prod = rho<T>(w1, lambda) * rho<T>(w2, lambda);
  const T interactions = T(static_cast<long long>(cross_coincidences(w1, w2)));
  return {prod * (T(1) - lambda * interactions), prod};
}

/// JSON fixture form: [[x1,..,xd], [..], ...].
std::string walk_to_json(const Walk& w);
Walk walk_from_json(const std::string& text);

}  // namespace wsaw
