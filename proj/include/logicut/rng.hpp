#pragma once

#include <cmath>
#include <cstdint>

namespace logicut {

// Deterministic pseudo-random stream used by every generator and heuristic.
//
// Algorithm: SplitMix64 (Steele, Lea, Flood 2014), a 64-bit counter-based
// generator. The state advances by the golden-ratio increment and each output
// is a finalizer of the counter, so the stream is a pure function of
// (seed, draw index) and reproduces bit-identically across platforms and
// compilers. Instance files generated from a seed are therefore byte-stable.
//
// Derived draws:
//  - uniform doubles take the top 53 bits of the counter output, scaled by
//    2^-53 (the usual mantissa construction), giving values in [0, 1);
//  - normal draws use Box-Muller and always consume exactly two uniforms
//    (no spare-value caching, so the consumption pattern is predictable);
//  - integer ranges use rejection-free scaling (acceptable bias is < 2^-53
//    for the desk-scale ranges used here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in {lo, ..., hi} inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

// Sub-seed for trial t of a seeded procedure. Mixing with a multiple of the
// golden-ratio constant keeps neighboring trials decorrelated even though
// SplitMix64 already finalizes the counter.
inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t trial) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (trial + 1));
}

// Closest-integer rounding with halves away from zero (the convention used by
// the instance generators).
inline double round_half_away(double x) {
  return x >= 0.0 ? std::floor(x + 0.5) : std::ceil(x - 0.5);
}

}  // namespace logicut
