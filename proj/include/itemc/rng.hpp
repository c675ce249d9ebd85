// Deterministic random number generation.
//
// Every public sampling operation in this project takes an explicit 64-bit
// seed. Independent streams are derived with splitmix64 so that results are
// reproducible bit-for-bit across runs and platforms; std::mt19937_64 is the
// underlying engine (its output sequence is fixed by the standard) and all
// variate mappings below are implemented by hand, never via
// std::*_distribution, whose output is implementation-defined.

#pragma once

#include <cstdint>
#include <random>

namespace itemc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derive a child seed from a parent seed and a stream tag.
inline std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ tag);
}

inline std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return seed_mix(seed_mix(seed, a), b);
}

inline std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  return seed_mix(seed_mix(seed, a, b), c);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-1, 1).
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  /// Unbiased uniform integer in [0, bound), bound >= 1. Rejection sampled.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace itemc
