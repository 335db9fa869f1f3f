#pragma once

#include "sliced/core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace sliced {

/// Counter-based random stream keyed by (master seed, task index).
///
/// Output k of a stream is a fixed hash of (key, k), so two streams with the
/// same key produce identical sequences no matter which thread draws them or
/// in what order tasks are scheduled.  Satisfies UniformRandomBitGenerator,
/// so it plugs into the <random> distributions.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(Seed seed, std::uint64_t task) : key_(mix(mix(seed) ^ (task * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  /// Child stream for a sub-task; independent of this stream's position.
  Stream split(std::uint64_t sub_task) const { return Stream(key_, sub_task); }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline double standard_normal(Stream& s) {
  // Polar Box-Muller without caching, so every draw consumes a fixed pattern.
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (;;) {
    const double u = unif(s);
    const double v = unif(s);
    const double r = u * u + v * v;
    if (r > 0.0 && r < 1.0) return u * std::sqrt(-2.0 * std::log(r) / r);
  }
}

inline double uniform01(Stream& s) { return std::uniform_real_distribution<double>(0.0, 1.0)(s); }

/// rows x cols matrix of i.i.d. N(0,1).
inline Matrix standard_normal_matrix(Stream& s, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = standard_normal(s);
  return g;
}

}  // namespace sliced
