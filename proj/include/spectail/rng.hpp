#pragma once

#include <cstdint>
#include <random>

namespace spectail {

using Rng = std::mt19937_64;

/// One step of the SplitMix64 generator.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the `index`-th child stream of `master`. Child streams are what
/// make trial blocks independent of how they are scheduled across threads.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

/// Uniform in the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  double u = 0.0;
  do {
    u = uniform01(rng);
  } while (u <= 0.0);
  return u;
}

}  // namespace spectail
