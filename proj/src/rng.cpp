#include "wsaw/rng.hpp"

namespace wsaw {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 RandomSource::substream(std::uint64_t index) const {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (index * 0xD1B54A32D192ED03ULL);
  return std::mt19937_64(splitmix64(state));
}

std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  if (n <= 1) return 0;
  // reject the top partial block so every residue is equally likely
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % n;
}

}  // namespace wsaw
