#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

namespace ess {

/// All stochastic components draw from a 64-bit Mersenne Twister seeded from
/// a single run seed, so (inputs, seed) fixes every result.
using Rng = std::mt19937_64;

[[nodiscard]] inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

/// Uniform draw on [lo, hi]; returns lo when the interval is a point.
[[nodiscard]] inline double uniform_in(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  std::uniform_real_distribution<double> dist(lo, hi);
  return std::min(dist(rng), hi);
}

}  // namespace ess
