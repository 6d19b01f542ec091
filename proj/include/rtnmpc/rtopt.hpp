#pragma once

#include <cstdint>

#include "rtnmpc/nlp.hpp"

namespace rtnmpc {

enum class OptVariant {
  fixed_hessian_gradient,  ///< u0+ = -Ht^{-1}((H - Ht)u0 + G x+), Ht = rho I
  exact_newton,            ///< one full Newton step on F(z) + C x+ = 0
};

struct ContractionEstimate {
  double value;
  bool empirical;  ///< true when obtained by sampling rather than a norm formula
};

/// Sampling region for the empirical contraction estimate: parameters are
/// drawn from a ball of radius x_radius, iterates from a ball of radius
/// z_radius around the exact solution.
struct SampleRegion {
  double x_radius = 1.0;
  double z_radius = 1.0;
};

/// One real-time optimizer iteration per sample: the map phi of the
/// optimizer dynamics z+ = phi(x+, z).
class RealTimeOptimizer {
 public:
  /// Condensed path; rho is ignored by exact_newton.
  RealTimeOptimizer(const LqNlp& lq, OptVariant variant, double rho = 0.0);

  /// General path (exact_newton only; the condensed update needs an LqNlp).
  RealTimeOptimizer(const NlpProblem& problem, OptVariant variant);

  /// phi(x_next, z): one iteration at the already-advanced plant state.
  KktPoint step(const KktPoint& z, const Vec& x_next) const;

  /// LQ path: exactly ||Ht^{-1}(H - Ht)|| (0 for exact_newton).
  ContractionEstimate contraction_factor() const;

  /// General path: max over sampled (x, z) pairs of
  /// ||step(z, x) - z_bar(x)|| / ||z - z_bar(x)||.
  ContractionEstimate contraction_factor_sampled(const SampleRegion& region,
                                                 int n_samples = 200,
                                                 std::uint64_t seed = 0) const;

  OptVariant variant() const { return variant_; }
  double rho() const { return rho_; }
  const NlpProblem& problem() const { return *problem_; }
  const LqNlp* lq() const { return lq_; }

 private:
  OptVariant variant_;
  double rho_;
  const LqNlp* lq_;
  const NlpProblem* problem_;
};

}  // namespace rtnmpc
