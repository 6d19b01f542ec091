#pragma once

#include <cstdint>
#include <random>

#include "rtnmpc/linalg.hpp"

namespace rtnmpc {

/// Deterministic random generator with platform-stable output.
/// std::mt19937_64 is fully specified by the standard; the uniform and
/// normal transforms below avoid the implementation-defined distributions
/// so that seeded runs are byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal();

  Vec normal_vec(Eigen::Index n);

  /// Uniform in the Euclidean ball of the given radius.
  Vec ball(Eigen::Index n, double radius);

 private:
  std::mt19937_64 eng_;
};

}  // namespace rtnmpc
