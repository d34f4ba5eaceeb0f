#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

namespace chernlab {

/// SplitMix64. Chosen over <random> engines so that streams are cheap to
/// fork per sample index and the generated bytes do not depend on the
/// standard library's distribution implementations.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Standard normal pair (Box-Muller).
  std::pair<double, double> normal_pair() {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Complex Gaussian with independent N(0,1) real and imaginary parts.
  std::complex<double> normal_complex() {
    auto [x, y] = normal_pair();
    return {x, y};
  }
};

/// Derives an independent stream seed from (seed, stream tag, index). Used to
/// give every sample of a scan its own generator so results are independent
/// of evaluation order and thread count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t index) {
  auto scramble = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return scramble(seed + 0x9E3779B97F4A7C15ull * scramble(stream + scramble(index + 1)));
}

}  // namespace chernlab
