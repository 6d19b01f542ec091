#include "rtnmpc/rtopt.hpp"

#include <algorithm>

#include "rtnmpc/errors.hpp"
#include "rtnmpc/rng.hpp"

namespace rtnmpc {

RealTimeOptimizer::RealTimeOptimizer(const LqNlp& lq, OptVariant variant, double rho)
    : variant_(variant), rho_(rho), lq_(&lq), problem_(&lq.problem) {
  if (variant == OptVariant::fixed_hessian_gradient && !(rho > 0.0))
    throw ConfigError("RealTimeOptimizer: fixed_hessian_gradient needs rho > 0");
}

RealTimeOptimizer::RealTimeOptimizer(const NlpProblem& problem, OptVariant variant)
    : variant_(variant), rho_(0.0), lq_(nullptr), problem_(&problem) {
  if (variant != OptVariant::exact_newton)
    throw ConfigError("RealTimeOptimizer: the condensed update needs an LqNlp");
}

KktPoint RealTimeOptimizer::step(const KktPoint& z, const Vec& x_next) const {
  if (variant_ == OptVariant::exact_newton) {
    const NlpProblem& p = *problem_;
    const Vec res = kkt_residual(p, z, x_next);
    Mat kkt = Mat::Zero(p.n + p.n_g, p.n + p.n_g);
    const Mat J = p.eval_jac_g(z.y);
    kkt.topLeftCorner(p.n, p.n) = p.eval_hess_f(z.y) + p.eval_hess_g_lambda(z.y, z.lambda);
    kkt.topRightCorner(p.n, p.n_g) = J.transpose();
    kkt.bottomLeftCorner(p.n_g, p.n) = J;
    Eigen::FullPivLU<Mat> lu(kkt);
    if (!lu.isInvertible())
      throw RegularityError("optimizer step: singular KKT matrix");
    const Vec dz = lu.solve(-res);
    return KktPoint{z.y + dz.head(p.n), z.lambda + dz.tail(p.n_g)};
  }

  // fixed_hessian_gradient on the condensed system:
  // u0+ = -(1/rho)((H - rho I) u0 + G x_next)
  const LqNlp& lq = *lq_;
  const Vec u0 = lq.problem.input_of(z);
  const Mat Ht = rho_ * Mat::Identity(lq.n_u, lq.n_u);
  const Vec u_next = -(1.0 / rho_) * ((lq.H - Ht) * u0 + lq.G * x_next);
  return lq.complete_point(x_next, u_next);
}

ContractionEstimate RealTimeOptimizer::contraction_factor() const {
  if (variant_ == OptVariant::exact_newton) return {0.0, false};
  if (lq_ == nullptr)
    throw ConfigError("contraction_factor: condensed matrices unavailable; "
                      "use contraction_factor_sampled");
  const Mat Ht = rho_ * Mat::Identity(lq_->n_u, lq_->n_u);
  return {spectral_norm(Ht.inverse() * (lq_->H - Ht)), false};
}

ContractionEstimate RealTimeOptimizer::contraction_factor_sampled(
    const SampleRegion& region, int n_samples, std::uint64_t seed) const {
  if (n_samples <= 0 || !(region.x_radius > 0.0) || !(region.z_radius > 0.0))
    throw ConfigError("contraction_factor_sampled: empty sampling region");
  const NlpProblem& p = *problem_;
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Vec x = rng.ball(p.n_x, region.x_radius);
    const Solution sol = solve_exact(p, x, KktPoint::zero(p.n, p.n_g));
    const Vec dz = rng.ball(p.n + p.n_g, region.z_radius);
    const double dist = dz.norm();
    if (dist < 1e-12) continue;
    const KktPoint z = KktPoint::from_z(sol.z_bar.z() + dz, p.n, p.n_g);
    const KktPoint z_next = step(z, x);
    worst = std::max(worst, (z_next.z() - sol.z_bar.z()).norm() / dist);
  }
  return {worst, true};
}

}  // namespace rtnmpc
