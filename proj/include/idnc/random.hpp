#pragma once

// Random streams used by the simulator.
//
// Every frame owns one std::mt19937_64 engine. Its seed is derived from the
// run's base seed and the frame's iteration index with splitmix64:
//
//   frame_seed(base, i) = splitmix64(base ^ splitmix64(i + 1))
//
// Uniform reals are built from the top 53 bits of one engine output, so the
// stream is identical on every standard library (std::uniform_real_distribution
// is implementation-defined and is not used).
//
// Draw order within a frame never changes:
//   1. M draws for the per-user erasure probabilities (user 0 .. M-1),
//   2. M*N draws for the uncoded initial phase (user-major, packet-minor),
//   3. per recovery transmission, one draw per non-completed user in
//      ascending user id.

#include <cstdint>
#include <random>

namespace idnc {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t frame_seed(std::uint64_t base_seed, std::uint64_t iteration) noexcept {
  return splitmix64(base_seed ^ splitmix64(iteration + 1));
}

// Uniform on [0, 1).
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// True with probability p.
inline bool bernoulli(Engine& rng, double p) {
  return uniform01(rng) < p;
}

}  // namespace idnc
