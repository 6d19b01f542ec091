#include "rtnmpc/pipeline.hpp"

#include <cmath>

#include "rtnmpc/errors.hpp"

namespace rtnmpc {

RegionConfig resolve_region(const ProblemConfig& config, const LqNlp& lq) {
  RegionConfig r;
  r.r_z = config.r_z;
  r.r_x = config.r_x;
  r.r_q = config.r_q;
  double V_auto = 0.0;
  if (!config.V_bar || !config.V_bar_q) {
    Vec x_max = config.x_max.value_or([&] {
      Vec v = Vec::Zero(lq.n_x);
      v(0) = 1.0;
      return v;
    }());
    V_auto = config.V_bar_scale * x_max.dot(lq.P.P * x_max);
    if (!(V_auto > 0.0))
      throw ConfigError("region: V(x_max) is zero; set region.V_bar explicitly");
  }
  r.V_bar = config.V_bar.value_or(V_auto);
  r.V_bar_q = config.V_bar_q.value_or(std::min(r.V_bar, V_auto > 0.0 ? V_auto : r.V_bar));
  if (r.V_bar_q > r.V_bar) throw ConfigError("region: V_bar_q must not exceed V_bar");
  r.T0 = config.T0.value_or(config.T_d);
  return r;
}

PipelineResult run_certification(const ProblemConfig& config) {
  config.validate();
  const ContinuousLTI model = config.make_model();
  PipelineResult res{build_lq_nlp(model, config.T_d, config.paper_literal_h),
                     0.0,
                     {},
                     {},
                     {},
                     {}};
  const LqNlp& lq = res.lq;

  res.rho = config.rho.value_or(config.rho_scale * lambda_max(lq.H));
  const RealTimeOptimizer opt =
      config.variant == OptVariant::exact_newton
          ? RealTimeOptimizer(lq, OptVariant::exact_newton)
          : RealTimeOptimizer(lq, OptVariant::fixed_hessian_gradient, res.rho);

  const double kappa_hat = opt.contraction_factor().value;
  if (!(kappa_hat < 1.0))
    throw CertificationError("optimizer contraction violated: kappa_hat = " +
                             std::to_string(kappa_hat) + " >= 1 (rho = " +
                             std::to_string(res.rho) + ")");

  const double est_T_min = config.est_T_min.value_or(config.T_d / 100.0);
  const std::vector<double> grid =
      log_spaced_grid(est_T_min, config.T_d, config.est_grid_points);

  res.lyap = estimate_lyapunov_constants(model, lq.P, lq.K, grid);
  res.region = resolve_region(config, lq);

  Primaries prim;
  prim.a1 = res.lyap.a1;
  prim.a2 = res.lyap.a2;
  prim.a3 = res.lyap.a3;
  prim.sigma = estimate_sensitivity_lq(lq);
  prim.kappa_hat = kappa_hat;
  const StateBounds sb = estimate_state_bounds(model, grid);
  prim.L_psi_x = sb.L_psi_x;
  prim.L_psi_u = sb.L_psi_u;
  prim.mu = config.mu_mode == MuMode::lq
                ? estimate_second_order_growth_lq(lq)
                : estimate_second_order_growth_sampled(
                      lq, res.lyap.a3 / res.lyap.a2, grid, res.region.V_bar_q,
                      res.region.r_q, config.est_samples, config.seed);

  res.consts = derive_chain(prim, res.region);
  res.consts.seed = config.seed;
  res.consts.grid_T_min = grid.front();
  res.consts.grid_T_max = grid.back();
  res.consts.grid_points = static_cast<long>(grid.size());
  sampling_bounds(res.consts);

  const MaxStableResult ms = max_stable_T(res.consts, res.consts.T0);
  res.consts.T_star = ms.T_star;
  res.consts.T_star_crossing_found = ms.crossing_found;

  const double s_lo = config.sweep_T_min.value_or(config.T_d / 100.0);
  const double s_hi = config.sweep_T_max.value_or(config.T_d);
  std::vector<double> sweep_grid;
  if (config.sweep_log) {
    sweep_grid = log_spaced_grid(s_lo, s_hi, config.sweep_points);
  } else {
    sweep_grid.resize(config.sweep_points);
    for (long i = 0; i < config.sweep_points; ++i)
      sweep_grid[i] = config.sweep_points == 1
                          ? s_hi
                          : s_lo + (s_hi - s_lo) * static_cast<double>(i) /
                                       static_cast<double>(config.sweep_points - 1);
  }
  res.eig_curve = eigenvalue_sweep(res.consts, sweep_grid);
  return res;
}

}  // namespace rtnmpc
