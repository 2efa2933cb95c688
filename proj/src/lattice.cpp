#include "wsaw/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace wsaw {

Point::Point(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error("dimension must lie in [1, " + std::to_string(kMaxDim) + "], got " +
                std::to_string(dim));
  }
  dim_ = static_cast<std::uint8_t>(dim);
}

Point::Point(std::initializer_list<int> coords) : Point(static_cast<int>(coords.size())) {
  std::size_t i = 0;
  for (int v : coords) c_[i++] = v;
}

Point::Point(const std::vector<int>& coords) : Point(static_cast<int>(coords.size())) {
  for (std::size_t i = 0; i < coords.size(); ++i) c_[i] = coords[i];
}

Point Point::unit(int dim, int axis, int sign) {
  Point p(dim);
  p[axis] = sign;
  return p;
}

int Point::sup_norm() const {
  int m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(c_[i]));
  return m;
}

int Point::l1_norm() const {
  int s = 0;
  for (int i = 0; i < dim_; ++i) s += std::abs(c_[i]);
  return s;
}

Point Point::operator+(const Point& o) const {
  if (o.dim_ != dim_) throw Error("dimension mismatch in point addition");
  Point r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] += o.c_[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  if (o.dim_ != dim_) throw Error("dimension mismatch in point subtraction");
  Point r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] -= o.c_[i];
  return r;
}

Point Point::operator-() const {
  Point r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] = -r.c_[i];
  return r;
}

std::vector<int> Point::coords() const { return {c_.begin(), c_.begin() + dim_}; }

std::string Point::to_string() const {
  std::string s;
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s;
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[i])) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

namespace {

int parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

}  // namespace

Point parse_point(std::string_view text) {
  std::vector<int> c;
  for (auto part : split(text, ',')) c.push_back(parse_int(part));
  if (c.empty() || static_cast<int>(c.size()) > kMaxDim) {
    throw Error("bad point '" + std::string(text) + "'");
  }
  return Point(c);
}

std::vector<Point> neighbors(const Point& p) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(2 * p.dim()));
  for (int j = 0; j < p.dim(); ++j) {
    Point a = p;
    a[j] += 1;
    out.push_back(a);
    Point b = p;
    b[j] -= 1;
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------- boxes

bool BoundingBox::contains(const Point& p) const {
  for (int i = 0; i < lo.dim(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

std::size_t BoundingBox::volume() const {
  std::size_t v = 1;
  for (int i = 0; i < lo.dim(); ++i) v *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  return v;
}

std::optional<BoundingBox> BoundingBox::intersect(const BoundingBox& o) const {
  BoundingBox r{lo, hi};
  for (int i = 0; i < lo.dim(); ++i) {
    r.lo[i] = std::max(lo[i], o.lo[i]);
    r.hi[i] = std::min(hi[i], o.hi[i]);
    if (r.lo[i] > r.hi[i]) return std::nullopt;
  }
  return r;
}

void BoundingBox::for_each(const std::function<void(const Point&)>& f) const {
  const int d = lo.dim();
  Point p = lo;
  while (true) {
    f(p);
    int i = d - 1;
    while (i >= 0) {
      if (p[i] < hi[i]) {
        ++p[i];
        break;
      }
      p[i] = lo[i];
      --i;
    }
    if (i < 0) return;
  }
}

std::vector<Point> BoundingBox::points() const {
  std::vector<Point> out;
  out.reserve(volume());
  for_each([&](const Point& p) { out.push_back(p); });
  return out;
}

BoundingBox box_around(const Point& c, int r) {
  BoundingBox b{c, c};
  for (int i = 0; i < c.dim(); ++i) {
    b.lo[i] -= r;
    b.hi[i] += r;
  }
  return b;
}

// ---------------------------------------------------------------- symmetries

Symmetry Symmetry::identity(int dim) {
  Symmetry g;
  g.dim = dim;
  for (int i = 0; i < dim; ++i) {
    g.perm[i] = static_cast<std::uint8_t>(i);
    g.sign[i] = 1;
  }
  return g;
}

Point Symmetry::apply(const Point& x) const {
  Point r(dim);
  for (int i = 0; i < dim; ++i) r[i] = sign[i] * x[perm[i]];
  return r;
}

Symmetry Symmetry::inverse() const {
  // (g x)_i = s_i x_{p(i)}  =>  x_{p(i)} = s_i (g x)_i.
  Symmetry h;
  h.dim = dim;
  for (int i = 0; i < dim; ++i) {
    h.perm[perm[i]] = static_cast<std::uint8_t>(i);
    h.sign[perm[i]] = sign[i];
  }
  return h;
}

bool Symmetry::is_identity() const {
  for (int i = 0; i < dim; ++i) {
    if (perm[i] != i || sign[i] != 1) return false;
  }
  return true;
}

const std::vector<Symmetry>& hyperoctahedral_group(int dim) {
  static std::mutex mu;
  static std::map<int, std::vector<Symmetry>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it != cache.end()) return it->second;

  std::vector<Symmetry> group;
  std::vector<int> perm(static_cast<std::size_t>(dim));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      Symmetry g;
      g.dim = dim;
      for (int i = 0; i < dim; ++i) {
        g.perm[i] = static_cast<std::uint8_t>(perm[i]);
        g.sign[i] = (mask >> i) & 1u ? -1 : 1;
      }
      group.push_back(g);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  // next_permutation starts from the identity permutation, mask 0 first.
  return cache.emplace(dim, std::move(group)).first->second;
}

// ---------------------------------------------------------------- domains

Domain Domain::whole(int dim) {
  Domain d;
  d.kind_ = Kind::Whole;
  d.dim_ = Point(dim).dim();
  return d;
}

Domain Domain::box(const Point& center, int radius) {
  if (radius < 0) throw Error("box radius must be >= 0");
  Domain d;
  d.kind_ = Kind::Box;
  d.dim_ = center.dim();
  d.a_ = center;
  d.n_ = radius;
  return d;
}

Domain Domain::half_space(int dim, int n) {
  if (n < 0) throw Error("half-space offset must be >= 0");
  Domain d;
  d.kind_ = Kind::HalfSpace;
  d.dim_ = Point(dim).dim();
  d.n_ = n;
  return d;
}

Domain Domain::positive_box(int dim, int n) {
  if (n < 1) throw Error("positive box radius must be >= 1 (Lambda_0^+ is empty)");
  Domain d;
  d.kind_ = Kind::PositiveBox;
  d.dim_ = Point(dim).dim();
  d.n_ = n;
  return d;
}

Domain Domain::block(const Point& lower, const Point& upper) {
  if (lower.dim() != upper.dim()) throw Error("block corners differ in dimension");
  for (int i = 0; i < lower.dim(); ++i) {
    if (lower[i] > 0 || upper[i] < 0) {
      throw Error("block corners must satisfy a_i <= 0 <= b_i");
    }
  }
  Domain d;
  d.kind_ = Kind::Block;
  d.dim_ = lower.dim();
  d.a_ = lower;
  d.b_ = upper;
  return d;
}

Domain Domain::explicit_set(int dim, std::vector<Point> points) {
  Domain d;
  d.kind_ = Kind::Explicit;
  d.dim_ = Point(dim).dim();
  for (const auto& p : points) {
    if (p.dim() != dim) throw Error("explicit set point has wrong dimension");
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  d.points_ = std::move(points);
  return d;
}

Domain Domain::intersection(std::vector<Domain> parts) {
  if (parts.empty()) throw Error("empty intersection");
  Domain d;
  d.kind_ = Kind::Intersection;
  d.dim_ = parts.front().dim();
  for (const auto& p : parts) {
    if (p.dim() != d.dim_) throw Error("intersection parts differ in dimension");
  }
  d.parts_ = std::move(parts);
  return d;
}

bool Domain::contains(const Point& p) const {
  if (p.dim() != dim_) {
    throw Error("dimension mismatch: point " + p.to_string() + " vs domain of dimension " +
                std::to_string(dim_));
  }
  return contains_unchecked(p);
}

bool Domain::contains_unchecked(const Point& p) const {
  switch (kind_) {
    case Kind::Whole:
      return true;
    case Kind::Box:
      return (p - a_).sup_norm() <= n_;
    case Kind::HalfSpace:
      return p[0] >= -n_;
    case Kind::PositiveBox:
      return p.sup_norm() <= n_ && p[0] > 0;
    case Kind::Block:
      for (int i = 0; i < dim_; ++i) {
        if (p[i] < a_[i] || p[i] > b_[i]) return false;
      }
      return true;
    case Kind::Explicit:
      return std::binary_search(points_.begin(), points_.end(), p);
    case Kind::Intersection:
      for (const auto& part : parts_) {
        if (!part.contains_unchecked(p)) return false;
      }
      return true;
  }
  return false;
}

std::optional<BoundingBox> Domain::bounds() const {
  switch (kind_) {
    case Kind::Whole:
    case Kind::HalfSpace:
      return std::nullopt;
    case Kind::Box:
      return box_around(a_, n_);
    case Kind::PositiveBox: {
      BoundingBox b = box_around(Point(dim_), n_);
      b.lo[0] = 1;
      return b;
    }
    case Kind::Block:
      return BoundingBox{a_, b_};
    case Kind::Explicit: {
      if (points_.empty()) return std::nullopt;
      BoundingBox b{points_.front(), points_.front()};
      for (const auto& p : points_) {
        for (int i = 0; i < dim_; ++i) {
          b.lo[i] = std::min(b.lo[i], p[i]);
          b.hi[i] = std::max(b.hi[i], p[i]);
        }
      }
      return b;
    }
    case Kind::Intersection: {
      std::optional<BoundingBox> acc;
      for (const auto& part : parts_) {
        auto b = part.bounds();
        if (!b) continue;
        if (!acc) {
          acc = b;
        } else {
          acc = acc->intersect(*b);
          if (!acc) return BoundingBox{Point(dim_), Point(dim_)};  // empty; any box works
        }
      }
      return acc;
    }
  }
  return std::nullopt;
}

std::vector<Point> Domain::points() const {
  if (kind_ == Kind::Explicit) return points_;
  auto b = bounds();
  if (!b) {
    throw Error("cannot list the points of infinite domain " + to_string());
  }
  std::vector<Point> out;
  b->for_each([&](const Point& p) {
    if (contains_unchecked(p)) out.push_back(p);
  });
  return out;
}

bool Domain::invariant_under(const Symmetry& g) const {
  switch (kind_) {
    case Kind::Whole:
      return true;
    case Kind::Box:
      return g.apply(a_) == a_;
    case Kind::HalfSpace:
    case Kind::PositiveBox:
      return g.perm[0] == 0 && g.sign[0] == 1;
    case Kind::Block:
      for (int i = 0; i < dim_; ++i) {
        const int j = g.perm[i];
        const int lo = g.sign[i] > 0 ? a_[j] : -b_[j];
        const int hi = g.sign[i] > 0 ? b_[j] : -a_[j];
        if (lo != a_[i] || hi != b_[i]) return false;
      }
      return true;
    case Kind::Explicit:
      for (const auto& p : points_) {
        if (!std::binary_search(points_.begin(), points_.end(), g.apply(p))) return false;
      }
      return true;
    case Kind::Intersection:
      for (const auto& part : parts_) {
        if (!part.invariant_under(g)) return false;
      }
      return true;
  }
  return false;
}

std::string Domain::to_string() const {
  switch (kind_) {
    case Kind::Whole:
      return "all";
    case Kind::Box:
      return "box:" + a_.to_string() + ":" + std::to_string(n_);
    case Kind::HalfSpace:
      return "halfspace:" + std::to_string(n_);
    case Kind::PositiveBox:
      return "posbox:" + std::to_string(n_);
    case Kind::Block:
      return "block:" + a_.to_string() + ":" + b_.to_string();
    case Kind::Explicit: {
      std::string s = "set:";
      for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i) s += ';';
        s += points_[i].to_string();
      }
      return s;
    }
    case Kind::Intersection: {
      std::string s = "and(";
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += '|';
        s += parts_[i].to_string();
      }
      return s + ")";
    }
  }
  return "?";
}

namespace {

Point parse_center(std::string_view s, int dim) {
  if (s == "0") return Point(dim);
  Point p = parse_point(s);
  if (p.dim() != dim) throw Error("point '" + std::string(s) + "' has wrong dimension");
  return p;
}

}  // namespace

Domain parse_domain(std::string_view text, int dim) {
  const std::string full(text);
  auto fail = [&](const std::string& why) -> Error {
    return Error("invalid domain spec '" + full + "': " + why);
  };
  try {
    if (text == "all" || text == "zd") return Domain::whole(dim);
    if (text.starts_with("and(") && text.ends_with(")")) {
      std::vector<Domain> parts;
      for (auto p : split(text.substr(4, text.size() - 5), '|')) parts.push_back(parse_domain(p, dim));
      return Domain::intersection(std::move(parts));
    }
    auto fields = split(text, ':');
    const auto head = fields.front();
    if (head == "box") {
      if (fields.size() == 2) return Domain::box(Point(dim), parse_int(fields[1]));
      if (fields.size() == 3) return Domain::box(parse_center(fields[1], dim), parse_int(fields[2]));
      throw fail("expected box:R or box:C:R");
    }
    if (head == "halfspace" && fields.size() == 2) return Domain::half_space(dim, parse_int(fields[1]));
    if (head == "posbox" && fields.size() == 2) return Domain::positive_box(dim, parse_int(fields[1]));
    if (head == "block" && fields.size() == 3) {
      return Domain::block(parse_center(fields[1], dim), parse_center(fields[2], dim));
    }
    if (head == "set" && fields.size() == 2) {
      std::vector<Point> pts;
      if (!fields[1].empty()) {
        for (auto p : split(fields[1], ';')) pts.push_back(parse_center(p, dim));
      }
      return Domain::explicit_set(dim, std::move(pts));
    }
    throw fail("unknown kind '" + std::string(head) + "'");
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (msg.starts_with("invalid domain spec")) throw;
    throw fail(msg);
  }
}

bool same_set(const Domain& a, const Domain& b) {
  if (a.dim() != b.dim()) return false;
  if (a.to_string() == b.to_string()) return true;
  if (a.is_finite() && b.is_finite()) return a.points() == b.points();
  return false;
}

int exit_degree(const Domain& s, const Domain& within, const Point& y) {
  int k = 0;
  for (const auto& z : neighbors(y)) {
    if (within.contains_unchecked(z) && !s.contains_unchecked(z)) ++k;
  }
  return k;
}

std::vector<Edge> exit_edges(const Domain& s, const Domain& within,
                             const std::optional<BoundingBox>& window) {
  if (s.dim() != within.dim()) throw Error("dimension mismatch between S and enclosing domain");
  std::vector<Point> ys;
  if (window) {
    if (window->dim() != s.dim()) throw Error("window has wrong dimension");
    window->for_each([&](const Point& p) {
      if (s.contains_unchecked(p)) ys.push_back(p);
    });
  } else {
    if (!s.is_finite()) {
      throw Error("exit edges of infinite domain " + s.to_string() + " need a bounding window");
    }
    ys = s.points();
  }
  std::vector<Edge> out;
  for (const auto& y : ys) {
    for (const auto& z : neighbors(y)) {
      if (within.contains_unchecked(z) && !s.contains_unchecked(z)) out.emplace_back(y, z);
    }
  }
  return out;
}

}  // namespace wsaw
