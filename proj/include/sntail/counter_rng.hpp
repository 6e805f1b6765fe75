#pragma once

#include <cstdint>

namespace sntail {

// Stateless counter RNG: a SplitMix64 finalizer applied to
// seed + index * golden-ratio increment. The stream is a pure function of
// (seed, index), so any element can be regenerated independently; this is
// what makes sample batches bit-reproducible and parallelizable by row.
inline std::uint64_t counter_hash(std::uint64_t seed,
                                  std::uint64_t index) noexcept {
  std::uint64_t z = seed + index * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform on (0, 1), exclusive at both ends: the 2^-54 offset keeps
// quantile transforms away from the poles.
inline double counter_uniform(std::uint64_t seed,
                              std::uint64_t index) noexcept {
  return static_cast<double>(counter_hash(seed, index) >> 11) * 0x1p-53 +
         0x1p-54;
}

}  // namespace sntail
