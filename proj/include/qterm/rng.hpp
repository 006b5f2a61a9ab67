#pragma once

#include <cstdint>
#include <random>

namespace qterm {

/// Reproducible random streams, scheme "qterm-rng-v1":
///   engine  = std::mt19937_64 (output sequence fixed by the standard)
///   seeding = splitmix64 finalizer applied to (seed, stream) so sibling
///             streams of one seed are decorrelated
///   doubles = top 53 bits of each draw scaled by 2^-53
/// std::uniform_real_distribution is avoided because its output is
/// implementation-defined.
class Rng {
 public:
  static constexpr const char* kScheme = "qterm-rng-v1";

  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive(seed, stream)) {}

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the closed interval [lo, hi].
  double closed(double lo, double hi) {
    const double t = static_cast<double>(engine_() >> 11) / static_cast<double>((1ULL << 53) - 1);
    return lo + (hi - lo) * t;
  }

  /// Uniform on the open interval (lo, hi); endpoints rejected.
  double open(double lo, double hi) {
    for (;;) {
      const double v = closed(lo, hi);
      if (v > lo && v < hi) return v;
    }
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  }

 private:
  std::mt19937_64 engine_;
};

/// Stream ids.
inline constexpr std::uint64_t kStreamSpectrum = 1;
inline constexpr std::uint64_t kStreamMinimizer = 2;
/// Start points use kStreamStartBase + replicate index.
inline constexpr std::uint64_t kStreamStartBase = 1000;

}  // namespace qterm
