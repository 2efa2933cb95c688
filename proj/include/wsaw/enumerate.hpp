#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wsaw/census.hpp"
#include "wsaw/enclosure.hpp"
#include "wsaw/lattice.hpp"
#include "wsaw/walk.hpp"

namespace wsaw {

/// Truncated two-point function from one start point: the exact sum over
/// walks of length <= N for every reachable endpoint, plus a single slack that
/// bounds the total mass of all longer walks (summed over every endpoint).
///
/// The slack uses the exactly known mass W_N at length N. Let D be the largest
/// number of domain neighbours of a domain site (2d for infinite domains). Each
/// further step multiplies the mass by at most q = (D - lambda) beta, because
/// the immediate reversal revisits an occupied site. Hence
///   missing mass <= W_N * q1 / (1 - q),
/// with q1 = D beta when N = 0 and q1 = q otherwise. The row is rigorous when
/// q < 1; for D = 2d this never exceeds (2d beta)^{N+1} / (1 - 2d beta).
struct GreenRow {
  Point start;
  int n = 0;
  bool rigorous = true;
  std::vector<Point> endpoints;  // sorted
  std::vector<double> lower;
  double slack = 0.0;  // +inf when not rigorous
  double mass_at_n = 0.0;
  /// Relative floating-point allowance applied to every inexact lower value
  /// (all terms except the exact zero-length walk).
  double rounding = 0.0;

  double lower_at(const Point& y) const;
  /// lower + rounding allowance, excluding the tail.
  double lower_hi(std::size_t i) const;
  double lower_hi_at(const Point& y) const;
  Enclosure at(const Point& y) const;
  double total_lower() const;
  double max_lower() const;
  /// Upper bound on G(start, y) valid for every y, including unreached ones.
  double max_upper() const;
};

/// Which enumeration kernel backs a row.
enum class Kernel {
  Auto,          // free DP at lambda = 0, parallel census otherwise
  Census,        // parallel census, even at lambda = 0
  CensusSerial,  // serial reference census
};

/// Largest number of neighbours inside the domain over all its sites; 2d when
/// the domain is infinite.
int max_inner_degree(const Domain& domain);

/// Per-step growth factor q = (D - lambda) beta of the tail bound.
double tail_ratio(const ModelParams& params, int degree);

/// Missing-mass bound described on GreenRow; +inf unless tail_ratio < 1.
double tail_slack(const ModelParams& params, int degree, int n, double mass_at_n);

/// Evaluates sum_{k,P} c(y,k,P) beta^k (1-lambda)^P, compensated, in (k, P) order.
double evaluate_block(const WalkCensus& c, std::size_t endpoint_index, double beta, double lambda);

/// Cache of censuses and rows shared by the operations of one computation.
/// Start points are reduced to a canonical representative under the lattice
/// symmetries that preserve the domain, so symmetric rows are enumerated once.
/// Not thread-safe; the kernels themselves are parallel.
class Workspace {
 public:
  explicit Workspace(int threads = 0, Kernel kernel = Kernel::Auto, bool use_symmetry = true);

  int threads() const { return threads_; }
  Kernel kernel() const { return kernel_; }

  const GreenRow& row(const ModelParams& params, const Domain& domain, const Point& start, int n);
  /// Census for lambda > 0 (self-avoiding-only when lambda = 1).
  const WalkCensus& census(const ModelParams& params, const Domain& domain, const Point& start, int n);
  /// True when rows at these params are backed by a census.
  bool uses_census(const ModelParams& params) const;

  void clear();
  std::size_t census_count() const { return censuses_.size(); }

 private:
  struct Canonical {
    Point rep;
    Symmetry to_rep;  // rep = to_rep(start)
  };
  Canonical canonicalize(const Domain& domain, const Point& start) const;

  int threads_;
  Kernel kernel_;
  bool use_symmetry_;
  std::map<std::string, WalkCensus> censuses_;
  std::map<std::string, GreenRow> rows_;
};

/// G_beta^Lambda(x, y) truncated at length N with its tail enclosure.
Enclosure green(const ModelParams& params, const Domain& domain, const Point& x, const Point& y,
                int n, Workspace* ws = nullptr);

GreenRow green_row(const ModelParams& params, const Domain& domain, const Point& x, int n,
                   Workspace* ws = nullptr);

/// G^Lambda(0,x) - G^S(0,x) for S subset of Lambda: the mass of walks that leave
/// S. Computed from integer count differences when censuses back both rows.
Enclosure exit_mass(const ModelParams& params, const Domain& s, const Domain& domain, const Point& x,
                    int n, Workspace& ws);

/// phi_beta(S) = sum_{y in S, z notin S, y~z} G^S(0,y) beta. Requires 0 in S.
Enclosure phi(const ModelParams& params, const Domain& s, int n, Workspace* ws = nullptr);

/// chi(beta) = sum_x G_beta(0,x) over Z^d.
Enclosure chi_truncated(const ModelParams& params, int n, Workspace* ws = nullptr);

struct BubbleBound {
  double window_lower = 0.0;  // sum_{x in Lambda_R} lower(G(0,x))^2
  double lower = 0.0;         // same sum over every reached x
  double upper = kInf;        // certified bound on B(beta) when rigorous
  bool rigorous = false;
  int n = 0;
  int window = 0;
};

BubbleBound bubble_truncated(const ModelParams& params, int n, int window, Workspace* ws = nullptr);

}  // namespace wsaw
