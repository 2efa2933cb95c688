#include "wsaw/enclosure.hpp"

#include <algorithm>
#include <cmath>

namespace wsaw {

Enclosure& Enclosure::operator+=(const Enclosure& o) {
  lower += o.lower;
  upper += o.upper;
  truncation_n = std::max(truncation_n, o.truncation_n);
  rigorous = rigorous && o.rigorous;
  return *this;
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  Enclosure r;
  r.lower = a.lower * b.lower;
  // 0 * inf would be NaN; a zero factor known exactly kills the product.
  if ((a.upper == 0.0) || (b.upper == 0.0)) {
    r.upper = 0.0;
  } else {
    r.upper = a.upper * b.upper;
  }
  r.truncation_n = std::max(a.truncation_n, b.truncation_n);
  r.rigorous = a.rigorous && b.rigorous;
  return r;
}

Enclosure operator*(double c, const Enclosure& a) {
  Enclosure r = a;
  r.lower = c * a.lower;
  r.upper = c == 0.0 ? 0.0 : c * a.upper;
  return r;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "Holds";
    case Verdict::Fails:
      return "Fails";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

Verdict decide_le(const Enclosure& smaller, const Enclosure& larger) {
  if (smaller.upper <= larger.lower) return Verdict::Holds;
  if (smaller.lower > larger.upper) return Verdict::Fails;
  return Verdict::Inconclusive;
}

Verdict decide_lt(const Enclosure& smaller, const Enclosure& larger) {
  if (smaller.upper < larger.lower) return Verdict::Holds;
  if (smaller.lower >= larger.upper) return Verdict::Fails;
  return Verdict::Inconclusive;
}

double margin_le(const Enclosure& smaller, const Enclosure& larger) {
  return larger.lower - smaller.upper;
}

}  // namespace wsaw
