#pragma once

#include <cstdint>
#include <random>

namespace vocheck {

/// Seeded generator with a fixed uniform mapping. std::uniform_real_distribution
/// is implementation-defined, so we map the raw mt19937_64 stream ourselves to
/// keep scenario construction byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform integer on [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform01() * static_cast<double>(hi - lo + 1));
  }

  bool coin() { return uniform01() < 0.5; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vocheck
