#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adara {

/// Seeded generator for one randomness purpose. Draws are computed from raw
/// 64-bit output so results do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) { return static_cast<std::uint64_t>(uniform01() * n); }
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Independent sub-stream seed for (purpose, index) under one master seed.
std::uint64_t streamSeed(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0);

inline Rng makeStream(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0) {
  return Rng(streamSeed(master, purpose, index));
}

}  // namespace adara
