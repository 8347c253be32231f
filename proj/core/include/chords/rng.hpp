#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace chords {

// Counter-based generator: value(counter) is a pure function of
// (seed, stream, counter). Sample loops can therefore be partitioned across
// workers in chunks of counter space and stay bit-identical for any worker
// count. SplitMix64 finalizer over a Weyl sequence; passes the usual
// equidistribution smoke tests at the sample counts used here.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + counter * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform on (0,1]; never 0, so log() is safe.
  double u01(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on (-1,1].
  double symmetric(std::uint64_t counter) const { return 2.0 * u01(counter) - 1.0; }

  // Box-Muller pair; consumes counters (2c, 2c+1) in a dedicated substream.
  std::pair<double, double> normal_pair(std::uint64_t counter) const {
    const double r = std::sqrt(-2.0 * std::log(u01(2 * counter)));
    const double t = 6.2831853071795864769 * u01(2 * counter + 1);
    return {r * std::cos(t), r * std::sin(t)};
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Stable derivation of child seeds, e.g. one stream per sweep entry.
  static std::uint64_t derive(std::uint64_t seed, double salt) {
    std::uint64_t s;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    __builtin_memcpy(&s, &salt, sizeof(s));
    return mix(seed ^ mix(s));
  }

 private:
  std::uint64_t key_;
};

}  // namespace chords
