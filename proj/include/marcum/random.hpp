#pragma once

#include <cstdint>
#include <random>

namespace marcum {

/// Reproducible uniform stream: MT19937-64 seeded with the given value; each
/// double is (draw >> 11) * 2^-53, i.e. the top 53 bits, in [0, 1).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

  /// Uniform in (lo, hi]; used for arguments that must stay positive.
  double uniform_open_low(double lo, double hi) { return hi - (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace marcum
