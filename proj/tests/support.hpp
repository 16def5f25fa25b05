#pragma once

// Seeded generators for the property tests.

#include <cstdint>
#include <random>

namespace primegap::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed'9a95ULL);
  return gen;
}

inline std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng());
}

}  // namespace primegap::testing
