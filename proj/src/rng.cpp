#include "rtnmpc/rng.hpp"

#include <cmath>

namespace rtnmpc {

double Rng::normal() {
  const double u1 = std::max(uniform(), 0x1.0p-60);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

Vec Rng::normal_vec(Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Vec Rng::ball(Eigen::Index n, double radius) {
  Vec v = normal_vec(n);
  const double nrm = v.norm();
  if (nrm == 0.0) return Vec::Zero(n);
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
  return v * (r / nrm);
}

}  // namespace rtnmpc
