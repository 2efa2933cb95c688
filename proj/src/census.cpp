#include "wsaw/census.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <omp.h>

#include "wsaw/enclosure.hpp"
#include "wsaw/walk.hpp"

namespace wsaw {

int max_pairs(int k) {
  const int hi = (k + 2) / 2;  // ceil((k+1)/2)
  const int lo = (k + 1) / 2;  // floor((k+1)/2)
  return hi * (hi - 1) / 2 + lo * (lo - 1) / 2;
}

namespace {

std::vector<std::size_t> length_offsets(int n) {
  std::vector<std::size_t> off(static_cast<std::size_t>(n) + 2, 0);
  for (int k = 0; k <= n; ++k) off[k + 1] = off[k] + static_cast<std::size_t>(max_pairs(k)) + 1;
  return off;
}

constexpr std::size_t kMaxCensusEntries = std::size_t{1} << 28;

}  // namespace

// ------------------------------------------------------------ WalkCensus

class CensusBuilder {
 public:
  // `blocks` holds one stride-sized block per candidate endpoint, in the same
  // order as `points` (which must be sorted). All-zero blocks are dropped.
  static WalkCensus build(const Point& start, int n, bool saw_only, const std::vector<Point>& points,
                          const std::vector<std::uint64_t>& blocks) {
    WalkCensus c;
    c.start_ = start;
    c.n_ = n;
    c.saw_only_ = saw_only;
    c.length_offset_ = length_offsets(n);
    const std::size_t stride = c.stride();
    auto counts = std::make_shared<std::vector<std::uint64_t>>();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto* b = blocks.data() + i * stride;
      if (std::all_of(b, b + stride, [](std::uint64_t v) { return v == 0; })) continue;
      c.index_.emplace_back(points[i], static_cast<std::uint32_t>(counts->size() / stride));
      counts->insert(counts->end(), b, b + stride);
    }
    c.counts_ = std::move(counts);
    return c;
  }
};

std::vector<Point> WalkCensus::endpoints() const {
  std::vector<Point> out;
  out.reserve(index_.size());
  for (const auto& e : index_) out.push_back(e.first);
  return out;
}

std::ptrdiff_t WalkCensus::find(const Point& y) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), y,
                             [](const auto& e, const Point& p) { return e.first < p; });
  if (it == index_.end() || it->first != y) return -1;
  return it - index_.begin();
}

const std::uint64_t* WalkCensus::block(std::size_t endpoint_index) const {
  return counts_->data() + static_cast<std::size_t>(index_[endpoint_index].second) * stride();
}

std::uint64_t WalkCensus::count(std::size_t endpoint_index, int k, int pairs) const {
  if (k < 0 || k > n_ || pairs < 0 || pairs > max_pairs(k)) return 0;
  return block(endpoint_index)[offset(k) + static_cast<std::size_t>(pairs)];
}

std::uint64_t WalkCensus::count(const Point& y, int k, int pairs) const {
  const auto i = find(y);
  return i < 0 ? 0 : count(static_cast<std::size_t>(i), k, pairs);
}

std::uint64_t WalkCensus::walks_of_length(int k) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < index_.size(); ++i) {
    const auto* b = block(i);
    for (std::size_t j = offset(k); j < offset(k + 1); ++j) total += b[j];
  }
  return total;
}

std::uint64_t WalkCensus::total_walks() const {
  std::uint64_t total = 0;
  for (int k = 0; k <= n_; ++k) total += walks_of_length(k);
  return total;
}

WalkCensus WalkCensus::transformed(const Symmetry& g) const {
  WalkCensus c = *this;
  c.start_ = g.apply(start_);
  for (auto& e : c.index_) e.first = g.apply(e.first);
  std::sort(c.index_.begin(), c.index_.end());
  return c;
}

bool operator==(const WalkCensus& a, const WalkCensus& b) {
  if (a.start_ != b.start_ || a.n_ != b.n_ || a.saw_only_ != b.saw_only_ ||
      a.index_.size() != b.index_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.index_.size(); ++i) {
    if (a.index_[i].first != b.index_[i].first) return false;
    if (!std::equal(a.block(i), a.block(i) + a.stride(), b.block(i))) return false;
  }
  return true;
}

// ------------------------------------------------------------ serial reference

namespace {

void check_start(const Domain& domain, const Point& start, int n) {
  if (n < 0) throw Error("walk length cutoff N must be >= 0");
  if (!domain.contains(start)) {
    throw Error("start point " + start.to_string() + " lies outside domain " + domain.to_string());
  }
}

struct SerialState {
  const Domain* domain;
  int n;
  bool saw_only;
  std::vector<std::size_t> off;
  std::map<Point, std::vector<std::uint64_t>> blocks;
};

void serial_visit(SerialState& st, Walk& w) {
  auto& b = st.blocks[w.back()];
  if (b.empty()) b.assign(st.off.back(), 0);
  b[st.off[static_cast<std::size_t>(w.length())] + static_cast<std::size_t>(w.coincidence_pairs())] += 1;
  if (w.length() == st.n) return;
  for (const auto& z : neighbors(w.back())) {
    if (!st.domain->contains_unchecked(z)) continue;
    if (st.saw_only && w.occupancy(z) > 0) continue;
    w.push(z);
    serial_visit(st, w);
    w.pop();
  }
}

}  // namespace

WalkCensus census_serial(const Domain& domain, const Point& start, int n, bool self_avoiding_only) {
  check_start(domain, start, n);
  SerialState st{&domain, n, self_avoiding_only, length_offsets(n), {}};
  Walk w(start);
  serial_visit(st, w);
  std::vector<Point> pts;
  std::vector<std::uint64_t> flat;
  for (auto& [p, b] : st.blocks) {
    pts.push_back(p);
    flat.insert(flat.end(), b.begin(), b.end());
  }
  return CensusBuilder::build(start, n, self_avoiding_only, pts, flat);
}

// ------------------------------------------------------------ grid kernel

namespace {

// Flat array over Lambda_n(start) intersected with the domain's bounding box,
// padded by one guard layer so that neighbour offsets never leave the array.
struct Grid {
  int dim = 0;
  BoundingBox region;  // sites a walk can occupy
  BoundingBox padded;
  std::array<std::int64_t, kMaxDim> stride{};
  std::vector<std::uint8_t> inside;
  std::vector<std::int64_t> offsets;  // canonical neighbour order
  std::vector<std::int32_t> slot;     // inside sites, lexicographic; -1 elsewhere
  std::vector<Point> slot_point;

  std::int64_t index(const Point& p) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx += (p[i] - padded.lo[i]) * stride[static_cast<std::size_t>(i)];
    return idx;
  }
};

Grid make_grid(const Domain& domain, const Point& start, int n) {
  Grid g;
  g.dim = start.dim();
  BoundingBox reach = box_around(start, n);
  if (auto b = domain.bounds()) {
    auto r = reach.intersect(*b);
    if (!r) throw Error("start point outside the domain's extent");
    reach = *r;
  }
  g.region = reach;
  g.padded = box_around(Point(g.dim), 0);
  g.padded.lo = reach.lo;
  g.padded.hi = reach.hi;
  for (int i = 0; i < g.dim; ++i) {
    g.padded.lo[i] -= 1;
    g.padded.hi[i] += 1;
  }
  std::int64_t s = 1;
  for (int i = g.dim - 1; i >= 0; --i) {
    g.stride[static_cast<std::size_t>(i)] = s;
    s *= g.padded.hi[i] - g.padded.lo[i] + 1;
  }
  const auto volume = static_cast<std::size_t>(s);
  g.inside.assign(volume, 0);
  g.slot.assign(volume, -1);
  g.region.for_each([&](const Point& p) {
    if (domain.contains_unchecked(p)) {
      const auto idx = static_cast<std::size_t>(g.index(p));
      g.inside[idx] = 1;
      g.slot[idx] = static_cast<std::int32_t>(g.slot_point.size());
      g.slot_point.push_back(p);
    }
  });
  for (int j = 0; j < g.dim; ++j) {
    g.offsets.push_back(g.stride[static_cast<std::size_t>(j)]);
    g.offsets.push_back(-g.stride[static_cast<std::size_t>(j)]);
  }
  return g;
}

struct KernelTables {
  std::vector<std::size_t> off;        // per length
  std::vector<std::int64_t> slot_base;  // grid index -> slot * stride (or -1)
  std::size_t stride = 0;
  std::size_t entries = 0;
};

KernelTables make_tables(const Grid& g, int n) {
  KernelTables t;
  t.off = length_offsets(n);
  t.stride = t.off.back();
  t.entries = g.slot_point.size() * t.stride;
  if (t.entries > kMaxCensusEntries) {
    throw Error("census table too large (" + std::to_string(t.entries) +
                " counters); reduce N or use a smaller domain");
  }
  t.slot_base.assign(g.slot.size(), -1);
  for (std::size_t i = 0; i < g.slot.size(); ++i) {
    if (g.slot[i] >= 0) t.slot_base[i] = static_cast<std::int64_t>(g.slot[i]) * static_cast<std::int64_t>(t.stride);
  }
  return t;
}

// Iterative DFS from a node at depth `depth0` whose occupancy is already
// recorded in `occ`. Records the node itself and every descendant.
void dfs_subtree(const Grid& g, const KernelTables& t, std::int64_t start_site, int depth0,
                 int pairs0, int n, bool saw_only, std::uint8_t* occ, std::uint64_t* hist) {
  const int ndir = static_cast<int>(g.offsets.size());
  const std::int64_t* offs = g.offsets.data();
  const std::uint8_t* inside = g.inside.data();
  const std::int64_t* base = t.slot_base.data();
  const std::size_t* koff = t.off.data();

  hist[base[start_site] + static_cast<std::int64_t>(koff[depth0]) + pairs0] += 1;
  if (depth0 == n) return;

  std::vector<std::int64_t> site(static_cast<std::size_t>(n) + 1);
  std::vector<int> pairs(static_cast<std::size_t>(n) + 1);
  std::vector<int> dir(static_cast<std::size_t>(n) + 1);
  int depth = depth0;
  site[depth] = start_site;
  pairs[depth] = pairs0;
  dir[depth] = 0;

  while (true) {
    if (dir[depth] == ndir) {
      if (depth == depth0) break;
      occ[site[depth]] -= 1;
      --depth;
      continue;
    }
    const std::int64_t nb = site[depth] + offs[dir[depth]++];
    if (!inside[nb]) continue;
    const int np = pairs[depth] + occ[nb];
    if (saw_only && np > 0) continue;
    const int k = depth + 1;
    hist[base[nb] + static_cast<std::int64_t>(koff[k]) + np] += 1;
    if (k == n) continue;  // leaf: no need to touch the occupancy table
    occ[nb] += 1;
    depth = k;
    site[depth] = nb;
    pairs[depth] = np;
    dir[depth] = 0;
  }
}

struct Prefix {
  std::vector<std::int64_t> sites;  // sites[0] = start
  int pairs = 0;
};

}  // namespace

WalkCensus census_parallel(const Domain& domain, const Point& start, int n, bool self_avoiding_only,
                           int threads) {
  check_start(domain, start, n);
  if (n > 250) throw Error("N above 250 is not supported (occupancy counters are 8-bit)");
  const Grid g = make_grid(domain, start, n);
  const KernelTables t = make_tables(g, n);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();

  std::vector<std::uint64_t> hist(t.entries, 0);
  const std::int64_t s0 = g.index(start);

  // Grow prefixes level by level until there are enough independent subtasks.
  // Nodes strictly above the split depth are recorded here, the split-depth
  // nodes by their subtasks.
  const std::size_t target = static_cast<std::size_t>(8) * static_cast<std::size_t>(nthreads);
  std::vector<Prefix> level{Prefix{{s0}, 0}};
  int depth = 0;
  while (depth < n && level.size() < target) {
    std::vector<Prefix> next;
    for (const auto& p : level) {
      hist[t.slot_base[p.sites.back()] + static_cast<std::int64_t>(t.off[depth]) + p.pairs] += 1;
      for (auto off : g.offsets) {
        const std::int64_t nb = p.sites.back() + off;
        if (!g.inside[nb]) continue;
        const int occ = static_cast<int>(std::count(p.sites.begin(), p.sites.end(), nb));
        if (self_avoiding_only && occ > 0) continue;
        Prefix q = p;
        q.sites.push_back(nb);
        q.pairs += occ;
        next.push_back(std::move(q));
      }
    }
    level = std::move(next);
    ++depth;
  }

  const auto tasks = static_cast<std::int64_t>(level.size());
#pragma omp parallel num_threads(nthreads)
  {
    std::vector<std::uint64_t> local(t.entries, 0);
    std::vector<std::uint8_t> occ(g.inside.size(), 0);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < tasks; ++i) {
      const Prefix& p = level[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j + 1 < p.sites.size(); ++j) occ[p.sites[j]] += 1;
      occ[p.sites.back()] += 1;
      dfs_subtree(g, t, p.sites.back(), depth, p.pairs, n, self_avoiding_only, occ.data(), local.data());
      for (auto s : p.sites) occ[s] -= 1;
    }
#pragma omp critical(wsaw_census_merge)
    {
      for (std::size_t i = 0; i < t.entries; ++i) hist[i] += local[i];
    }
  }

  return CensusBuilder::build(start, n, self_avoiding_only, g.slot_point, hist);
}

// ------------------------------------------------------------ lambda = 0

FreeWalkSums free_walk_sums(const Domain& domain, const Point& start, int n, double beta, int threads) {
  check_start(domain, start, n);
  const Grid g = make_grid(domain, start, n);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const auto sites = static_cast<std::int64_t>(g.slot_point.size());

  std::vector<std::int64_t> grid_of(static_cast<std::size_t>(sites));
  for (std::size_t i = 0; i < g.slot.size(); ++i) {
    if (g.slot[i] >= 0) grid_of[static_cast<std::size_t>(g.slot[i])] = static_cast<std::int64_t>(i);
  }

  std::vector<CompensatedSum> acc(static_cast<std::size_t>(sites));
  const std::int64_t s0 = g.index(start);
  acc[static_cast<std::size_t>(g.slot[static_cast<std::size_t>(s0)])].add(1.0);
  std::vector<double> last(g.inside.size(), 0.0);  // beta^n * walks of length n

  if (static_cast<double>(n) * std::log2(2.0 * domain.dim()) < 63.0) {
    // Exact integer walk counts per length; G = sum_k count_k beta^k in k order,
    // the same terms and order as a census evaluated at lambda = 0.
    std::vector<std::uint64_t> cur(g.inside.size(), 0), nxt(g.inside.size(), 0);
    cur[static_cast<std::size_t>(s0)] = 1;
    double beta_k = 1.0;
    for (int k = 1; k <= n; ++k) {
      beta_k *= beta;
#pragma omp parallel for num_threads(nthreads) schedule(static)
      for (std::int64_t s = 0; s < sites; ++s) {
        const std::int64_t idx = grid_of[static_cast<std::size_t>(s)];
        std::uint64_t v = 0;
        for (auto off : g.offsets) v += cur[static_cast<std::size_t>(idx + off)];
        nxt[static_cast<std::size_t>(idx)] = v;
        if (v) acc[static_cast<std::size_t>(s)].add(static_cast<double>(v) * beta_k);
      }
      std::swap(cur, nxt);
    }
    for (std::size_t i = 0; i < cur.size(); ++i) last[i] = static_cast<double>(cur[i]) * beta_k;
  } else {
    std::vector<double> cur(g.inside.size(), 0.0), nxt(g.inside.size(), 0.0);
    cur[static_cast<std::size_t>(s0)] = 1.0;
    for (int k = 1; k <= n; ++k) {
      // Each site's update reads only `cur`, in canonical neighbour order, so the
      // result does not depend on how sites are distributed over threads.
#pragma omp parallel for num_threads(nthreads) schedule(static)
      for (std::int64_t s = 0; s < sites; ++s) {
        const std::int64_t idx = grid_of[static_cast<std::size_t>(s)];
        double v = 0.0;
        for (auto off : g.offsets) v += cur[static_cast<std::size_t>(idx + off)];
        v *= beta;
        nxt[static_cast<std::size_t>(idx)] = v;
        acc[static_cast<std::size_t>(s)].add(v);
      }
      std::swap(cur, nxt);
    }
    last = std::move(cur);
  }

  FreeWalkSums out;
  out.start = start;
  out.n = n;
  CompensatedSum mass;
  for (std::int64_t s = 0; s < sites; ++s) {
    const double v = acc[static_cast<std::size_t>(s)].value();
    mass.add(last[static_cast<std::size_t>(grid_of[static_cast<std::size_t>(s)])]);
    if (v == 0.0) continue;
    out.endpoints.push_back(g.slot_point[static_cast<std::size_t>(s)]);
    out.sums.push_back(v);
  }
  out.mass_at_n = mass.value();
  return out;
}

}  // namespace wsaw
