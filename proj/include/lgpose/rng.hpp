// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lgpose Authors
//
// Counter-based random numbers: every draw is a pure function of
// (seed, frame, channel), so streams are reproducible in any language and
// independent of evaluation order.
//
//   mix(z)      SplitMix64 finalizer applied to z + 0x9e3779b97f4a7c15
//   key         mix(mix(mix(seed) ^ frame) ^ channel)
//   uniform     ((key >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
//   normal(c)   Box-Muller cosine branch on uniforms of channels 2c and 2c+1

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lgpose::rng {

constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t frame, std::uint64_t channel) {
  return mix(mix(mix(seed) ^ frame) ^ channel);
}

constexpr double uniform(std::uint64_t seed, std::uint64_t frame, std::uint64_t channel) {
  return (double(key(seed, frame, channel) >> 11) + 0.5) * 0x1.0p-53;
}

inline double normal(std::uint64_t seed, std::uint64_t frame, std::uint64_t channel) {
  const double u1 = uniform(seed, frame, 2 * channel);
  const double u2 = uniform(seed, frame, 2 * channel + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lgpose::rng
