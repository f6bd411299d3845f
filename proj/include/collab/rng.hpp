// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace collab {

inline constexpr std::uint64_t fnv1a(std::string_view s,
                                     std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a_bytes(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic per-purpose generator: one global seed fans out into named
/// sub-streams so adding a consumer never perturbs existing ones.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view stream) {
  return std::mt19937_64(splitmix64(seed ^ fnv1a(stream)));
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view stream,
                                  std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ fnv1a(stream)) + index));
}

}  // namespace collab
