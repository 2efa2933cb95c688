#pragma once

#include <string>
#include <vector>

#include "wsaw/lattice.hpp"
#include "wsaw/rng.hpp"
#include "wsaw/walk.hpp"

namespace wsaw {

enum class McStrategy {
  Uniform,      // every step uniform over the 2d directions
  Nonreversing, // immediate reversal proposed with probability (1-lambda)/(2d-lambda)
};

McStrategy parse_strategy(const std::string& s);
std::string to_string(McStrategy s);

struct McLength {
  int n = 0;
  double contribution = 0.0;
  double std_error = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;  // per length
  std::vector<McLength> per_length;
};

/// Unbiased estimate of sum_{n <= nmax} sum_{gamma: x -> y in Lambda, |gamma| = n}
/// beta^n rho(gamma), stratified by length with `samples` fresh walks per n.
///
/// Uniform: weight (2d beta)^n rho 1{walk stays in Lambda and ends at y}.
/// Nonreversing: the immediate reversal is proposed with probability
/// (1-lambda)/(2d-lambda) and each other direction with 1/(2d-lambda), the
/// weight being the product of beta / proposal probability. Reversals are
/// damped exactly as rho damps them, so at lambda = 1 this is the usual
/// non-reversing walk with weight beta^n 2d (2d-1)^{n-1}, and for every lambda
/// the expectation is unchanged.
McEstimate estimate_green_mc(const ModelParams& params, const Domain& domain, const Point& x, const Point& y,
                             int nmax, std::size_t samples, const RandomSource& rng,
                             McStrategy strategy = McStrategy::Uniform, int threads = 0);

}  // namespace wsaw
