#pragma once

#include <cstdint>
#include <random>

namespace nn {

/// Seedable generator with a fixed draw discipline, so that every ensemble
/// built from the same seed is bit-identical on any conforming platform.
///
/// The raw stream is std::mt19937_64 (fully specified by the standard). All
/// derived draws are implemented here rather than with std::*_distribution,
/// whose output is implementation-defined. Draw costs are fixed:
///   - uniform():       one raw draw, 53-bit mantissa, value in [0, 1)
///   - uniform_index(): one raw draw, value in {0, ..., k-1}
///   - normal():        two raw draws, Box-Muller cosine branch
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, ..., k-1}. The modulo bias is below 2^-53 for the small
  /// ranges used here (k <= a few dozen).
  std::uint64_t uniform_index(std::uint64_t k) { return gen_() % k; }

  /// Standard normal via Box-Muller; consumes exactly two raw draws and
  /// keeps only the cosine variate so the stream position stays predictable.
  double normal() {
    double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nn
