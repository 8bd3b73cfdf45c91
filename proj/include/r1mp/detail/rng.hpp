#ifndef R1MP_DETAIL_RNG_HPP
#define R1MP_DETAIL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic draws on top of std::mt19937_64. The engine output is
// fully specified by the standard; the standard distributions are not, so
// the mappings below are spelled out to keep seeded runs reproducible
// across compilers.

namespace r1mp::detail {

// Uniform double in [0, 1) using the top 53 bits.
inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform double in [-1, 1).
inline double uniform_symmetric(std::mt19937_64& gen) {
  return 2.0 * uniform_unit(gen) - 1.0;
}

// Uniform index in [0, n) by rejection sampling.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return x % n;
}

// Standard normal via Box-Muller.
inline double normal(std::mt19937_64& gen) {
  double u1 = uniform_unit(gen);
  while (u1 <= 0.0) u1 = uniform_unit(gen);
  const double u2 = uniform_unit(gen);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

// SplitMix64 mix step, used to derive per-iteration sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace r1mp::detail

#endif  // R1MP_DETAIL_RNG_HPP
