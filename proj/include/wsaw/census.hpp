#pragma once

// Exact walk census: for every endpoint y, length k <= N and coincidence-pair
// count P, the number of walks x -> y of length k inside a domain whose weight
// is rho = (1 - lambda)^P. One census therefore serves every (beta, lambda).
// Counts are integers, so the parallel kernel merges per-thread tables by
// plain addition and is bit-identical to the serial reference for any thread
// count and schedule.

#include <cstdint>
#include <memory>
#include <vector>

#include "wsaw/lattice.hpp"

namespace wsaw {

/// Largest coincidence-pair count a length-k walk can have: the walk that
/// alternates between two sites, C(ceil((k+1)/2), 2) + C(floor((k+1)/2), 2).
int max_pairs(int k);

class WalkCensus {
 public:
  WalkCensus() = default;

  const Point& start() const { return start_; }
  int max_length() const { return n_; }
  /// True when only pair-free (self-avoiding) walks were enumerated; such a
  /// census may only be evaluated at lambda = 1.
  bool self_avoiding_only() const { return saw_only_; }

  /// Endpoints reached by at least one enumerated walk, sorted.
  std::vector<Point> endpoints() const;
  std::size_t endpoint_count() const { return index_.size(); }
  /// Index of y in endpoints(), or -1.
  std::ptrdiff_t find(const Point& y) const;
  const Point& endpoint(std::size_t i) const { return index_[i].first; }

  std::uint64_t count(std::size_t endpoint_index, int k, int pairs) const;
  std::uint64_t count(const Point& y, int k, int pairs) const;
  /// Number of walks of length k (any endpoint, any pair count).
  std::uint64_t walks_of_length(int k) const;
  /// Total number of enumerated walks (DFS nodes).
  std::uint64_t total_walks() const;

  /// Census from g(start): endpoints mapped through g, counts shared.
  WalkCensus transformed(const Symmetry& g) const;

  /// Layout: per endpoint block of `stride()` counters, length k occupying
  /// [offset(k), offset(k) + max_pairs(k)].
  std::size_t stride() const { return length_offset_.back(); }
  std::size_t offset(int k) const { return length_offset_[static_cast<std::size_t>(k)]; }
  const std::uint64_t* block(std::size_t endpoint_index) const;

  friend bool operator==(const WalkCensus& a, const WalkCensus& b);

 private:
  friend class CensusBuilder;

  Point start_;
  int n_ = 0;
  bool saw_only_ = false;
  std::vector<std::size_t> length_offset_;  // size n + 2
  std::vector<std::pair<Point, std::uint32_t>> index_;  // sorted endpoint -> block id
  std::shared_ptr<const std::vector<std::uint64_t>> counts_;
};

/// Plain recursive depth-first enumeration. Slow and simple; kept as the
/// reference the parallel kernel is tested against.
WalkCensus census_serial(const Domain& domain, const Point& start, int n, bool self_avoiding_only);

/// Same census with the DFS tree split at a prefix depth into independent
/// subtasks run under OpenMP. threads <= 0 means the OpenMP default.
WalkCensus census_parallel(const Domain& domain, const Point& start, int n,
                           bool self_avoiding_only, int threads = 0);

/// lambda = 0 kernel: rho is identically 1, so walks need no occupancy table
/// and the walk sum collapses to weighted walk counts by (endpoint, length).
struct FreeWalkSums {
  Point start;
  int n = 0;
  std::vector<Point> endpoints;  // sorted
  std::vector<double> sums;      // sum_{k<=n} beta^k #{walks start->y of length k}
  double mass_at_n = 0.0;        // sum_y beta^n #{walks of length n}
};

FreeWalkSums free_walk_sums(const Domain& domain, const Point& start, int n, double beta,
                            int threads = 0);

}  // namespace wsaw
