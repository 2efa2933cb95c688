#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsaw {

/// Raised for malformed input: dimension mismatches, bad domain strings,
/// violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDim = 8;

/// A site of Z^d. Coordinates beyond `dim()` are kept at zero so that the
/// defaulted comparisons and hashing only ever see meaningful data.
class Point {
 public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<int> coords);
  explicit Point(const std::vector<int>& coords);

  static Point origin(int dim) { return Point(dim); }
  static Point unit(int dim, int axis, int sign = 1);

  int dim() const { return dim_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  /// l-infinity norm max_j |x_j|.
  int sup_norm() const;
  /// l1 norm, i.e. graph distance to the origin.
  int l1_norm() const;

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator-() const;

  std::vector<int> coords() const;
  std::string to_string() const;

  friend auto operator<=>(const Point&, const Point&) = default;
  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::uint8_t dim_ = 0;
  std::array<std::int32_t, kMaxDim> c_{};
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

/// Parses "x1,x2,...,xd". Throws Error on malformed input.
Point parse_point(std::string_view text);

/// The 2d nearest neighbours in the order +e1,-e1,+e2,-e2,...,+ed,-ed.
std::vector<Point> neighbors(const Point& p);

inline bool adjacent(const Point& a, const Point& b) {
  return a.dim() == b.dim() && (a - b).l1_norm() == 1;
}

/// Axis-aligned integer box [lo, hi] (inclusive, componentwise).
struct BoundingBox {
  Point lo;
  Point hi;

  int dim() const { return lo.dim(); }
  bool contains(const Point& p) const;
  std::size_t volume() const;
  std::optional<BoundingBox> intersect(const BoundingBox& o) const;
  /// Calls f for every point in lexicographic order (first coordinate slowest).
  void for_each(const std::function<void(const Point&)>& f) const;
  std::vector<Point> points() const;
};

/// Box of sup-radius r around c, i.e. Lambda_r(c).
BoundingBox box_around(const Point& c, int r);

/// Signed permutation of coordinates: (g x)_i = sign_i * x_{perm_i}.
/// These are exactly the lattice automorphisms of Z^d fixing the origin.
struct Symmetry {
  std::array<std::uint8_t, kMaxDim> perm{};
  std::array<std::int8_t, kMaxDim> sign{};
  int dim = 0;

  static Symmetry identity(int dim);
  Point apply(const Point& x) const;
  Symmetry inverse() const;
  bool is_identity() const;
};

/// All 2^d d! signed permutations, identity first.
const std::vector<Symmetry>& hyperoctahedral_group(int dim);

/// Region of Z^d. Infinite regions (half-spaces, the whole lattice) are
/// membership predicates only and never materialized.
class Domain {
 public:
  enum class Kind { Whole, Box, HalfSpace, PositiveBox, Block, Explicit, Intersection };

  static Domain whole(int dim);
  /// Lambda_n(center) = { x : |x - center| <= n }.
  static Domain box(const Point& center, int radius);
  /// H_n = { x : x_1 >= -n }.
  static Domain half_space(int dim, int n);
  /// Lambda_n^+ = { x in Lambda_n : x_1 > 0 }.
  static Domain positive_box(int dim, int n);
  /// Block with corners a <= 0 <= b componentwise.
  static Domain block(const Point& lower, const Point& upper);
  static Domain explicit_set(int dim, std::vector<Point> points);
  static Domain intersection(std::vector<Domain> parts);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  /// Throws Error if p.dim() != dim().
  bool contains(const Point& p) const;
  /// Membership without the dimension check (hot paths).
  bool contains_unchecked(const Point& p) const;

  /// Smallest box known to contain the domain, or nullopt when unbounded.
  std::optional<BoundingBox> bounds() const;
  bool is_finite() const { return bounds().has_value(); }

  /// Members listed in lexicographic order. Throws for infinite domains.
  std::vector<Point> points() const;

  /// True if g maps the domain onto itself.
  bool invariant_under(const Symmetry& g) const;

  /// Canonical textual form; parse_domain(to_string()) reproduces the domain.
  std::string to_string() const;

  const std::vector<Point>& explicit_points() const { return points_; }
  const std::vector<Domain>& parts() const { return parts_; }

 private:
  Kind kind_ = Kind::Whole;
  int dim_ = 0;
  Point a_;  // center / lower corner
  Point b_;  // upper corner
  int n_ = 0;
  std::vector<Point> points_;  // sorted, unique
  std::vector<Domain> parts_;
};

/// Parses the textual domain syntax:
///   all                       Z^d
///   box:R  | box:C:R          Lambda_R(C), C written "x1,...,xd"
///   halfspace:N               H_N
///   posbox:N                  Lambda_N^+
///   block:A:B                 block with corners A <= 0 <= B
///   set:P1;P2;...             explicit finite set
///   and(D1|D2|...)            intersection
Domain parse_domain(std::string_view text, int dim);

/// True when the two domains are known to describe the same set (structural
/// equality, or equal point sets for finite domains).
bool same_set(const Domain& a, const Domain& b);

using Edge = std::pair<Point, Point>;

/// Ordered pairs (y, z) with y in S, z in `within` \ S, y ~ z. Pairs are sorted
/// by y (lexicographic) and then by the canonical neighbour order. When S is
/// infinite, `window` must bound the y's of interest.
std::vector<Edge> exit_edges(const Domain& s, const Domain& within,
                             const std::optional<BoundingBox>& window = std::nullopt);

/// Number of neighbours of y inside `within` but outside S.
int exit_degree(const Domain& s, const Domain& within, const Point& y);

}  // namespace wsaw
