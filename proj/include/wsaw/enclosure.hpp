#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace wsaw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// a + b rounded upward, for b >= 0: at least one ulp above a when b > 0.
inline double add_up(double a, double b) { return b > 0.0 ? std::nextafter(a + b, kInf) : a; }

/// Certified interval [lower, upper] around an infinite walk sum, produced by a
/// length cutoff N plus a tail bound. When `rigorous` is false the upper end is
/// +inf and only the partial sum is meaningful.
struct Enclosure {
  double lower = 0.0;
  double upper = 0.0;
  int truncation_n = 0;
  bool rigorous = true;

  static Enclosure exact(double v, int n = 0) { return {v, v, n, true}; }
  static Enclosure partial(double lower, int n) { return {lower, kInf, n, false}; }

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }

  Enclosure& operator+=(const Enclosure& o);
  friend Enclosure operator+(Enclosure a, const Enclosure& b) { return a += b; }
  /// Product of two enclosures of non-negative quantities.
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  /// Scaling by a non-negative constant.
  friend Enclosure operator*(double c, const Enclosure& a);
};

/// Neumaier-compensated running sum. Order of add() calls fixes the result.
class CompensatedSum {
 public:
  void add(double x);
  void add(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

enum class Verdict { Holds, Fails, Inconclusive };

std::string to_string(Verdict v);

/// Three-valued decision for "smaller <= larger" from two enclosures: Holds when
/// upper(smaller) <= lower(larger), Fails when lower(smaller) > upper(larger).
Verdict decide_le(const Enclosure& smaller, const Enclosure& larger);
/// Strict variant "smaller < larger".
Verdict decide_lt(const Enclosure& smaller, const Enclosure& larger);
/// Signed certified gap lower(larger) - upper(smaller).
double margin_le(const Enclosure& smaller, const Enclosure& larger);

}  // namespace wsaw
