#pragma once

#include <cstdint>

namespace unidos::rng {

// Counter-based stream: every draw is a pure function of
// (seed, tag, site, draw), so windows can grow without reshuffling.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t tag, std::int64_t site,
                          std::uint64_t draw = 0) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (tag * 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(site));
  h = mix64(h ^ (draw * 0xaef17502108ef2d9ULL));
  return h;
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t tag, std::int64_t site,
                        std::uint64_t draw = 0) {
  return static_cast<double>(hash(seed, tag, site, draw) >> 11) * 0x1.0p-53;
}

/// Seed of the i-th independent realization of a run.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) + index);
}

enum Tag : std::uint64_t { kTheta = 1, kAlpha = 2, kEta = 3 };

}  // namespace unidos::rng
