#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace wsaw {

/// Seeded source of independent, reproducible PRNG substreams. Substream i is
/// an mt19937_64 seeded from splitmix64 applied to (seed, i), so the mapping
/// from (seed, i) to the stream is fixed across platforms and thread counts.
struct RandomSource {
  std::uint64_t seed = 0;

  static constexpr const char* algorithm = "mt19937_64/splitmix64";

  std::mt19937_64 substream(std::uint64_t index) const;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Uniform integer in [0, n), by rejection (platform independent, unlike
/// std::uniform_int_distribution).
std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace wsaw
