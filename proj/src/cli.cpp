#include "rtnmpc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "rtnmpc/pipeline.hpp"
#include "fmtio.hpp"

namespace rtnmpc::cli {

namespace fs = std::filesystem;

namespace {

void apply_overrides(ProblemConfig& config, const Overrides& ov) {
  if (ov.T) config.sim_T = *ov.T;
  if (ov.rho) config.rho = *ov.rho;
  if (ov.seed) config.seed = *ov.seed;
  if (ov.out_dir) config.out_dir = *ov.out_dir;
}

/// Map exceptions to the documented exit codes; messages go to stderr.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << '\n';
    return kExitCertificationFailure;
  } catch (const BlowUpError& e) {
    std::cerr << "divergence: " << e.what() << " (step " << e.step << ")\n";
    return kExitDivergence;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  }
}

std::vector<double> sweep_grid_of(const ProblemConfig& config) {
  const double lo = config.sweep_T_min.value_or(config.T_d / 100.0);
  const double hi = config.sweep_T_max.value_or(config.T_d);
  if (config.sweep_log) return log_spaced_grid(lo, hi, config.sweep_points);
  std::vector<double> grid(config.sweep_points);
  for (long i = 0; i < config.sweep_points; ++i)
    grid[i] = config.sweep_points == 1
                  ? hi
                  : lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(config.sweep_points - 1);
  return grid;
}

int certify_into(const PipelineResult& res, const std::string& dir, bool quiet) {
  write_certificate((fs::path(dir) / "certificate.txt").string(), res.consts);
  write_lyapunov_csv((fs::path(dir) / "lyap_vs_T.csv").string(), res.lyap.curve);
  write_eigenvalue_csv((fs::path(dir) / "eigs_vs_T.csv").string(), res.eig_curve);
  if (!quiet) {
    std::cout << "kappa_hat = " << detail::fmt17(res.consts.kappa_hat)
              << "  a3 = " << detail::fmt17(res.consts.a3)
              << "  T2 = " << detail::fmt17(res.consts.T2)
              << "  T_star = " << detail::fmt17(res.consts.T_star)
              << (res.consts.T_star_crossing_found ? "" : " (unbounded within bracket)")
              << '\n';
    std::cout << "certificate written to " << dir << '\n';
  }
  return res.consts.T_star > 0.0 ? kExitOk : kExitCertificationFailure;
}

}  // namespace

std::string resolve_out_dir(const std::optional<std::string>& flag_value,
                            const std::optional<std::string>& config_value) {
  if (flag_value) return *flag_value;
  if (config_value) return *config_value;
  if (const char* env = std::getenv("RTNMPC_OUT"); env != nullptr && *env != '\0')
    return env;
  return ".";
}

int run_certify(const std::string& config_path, const Overrides& ov) {
  return guarded([&] {
    ProblemConfig config = parse_config_file(config_path);
    apply_overrides(config, ov);
    return certify_into(run_certification(config),
                        resolve_out_dir(ov.out_dir, config.out_dir), ov.quiet);
  });
}

int run_sweep(const std::string& config_path, const Overrides& ov) {
  return guarded([&] {
    ProblemConfig config = parse_config_file(config_path);
    apply_overrides(config, ov);
    const PipelineResult res = run_certification(config);
    const std::string dir = resolve_out_dir(ov.out_dir, config.out_dir);
    const std::vector<double> grid = sweep_grid_of(config);
    write_eigenvalue_csv((fs::path(dir) / "eigs_vs_T.csv").string(),
                         eigenvalue_sweep(res.consts, grid));
    write_lyapunov_csv((fs::path(dir) / "lyap_vs_T.csv").string(),
                       lyapunov_decrease_curve(config.make_model(), res.lq.P, res.lq.K, grid));
    if (!ov.quiet) std::cout << "sweep CSVs written to " << dir << '\n';
    return kExitOk;
  });
}

int run_simulate(const std::string& config_path, const Overrides& ov) {
  return guarded([&] {
    ProblemConfig config = parse_config_file(config_path);
    apply_overrides(config, ov);
    const PipelineResult res = run_certification(config);
    const std::string dir = resolve_out_dir(ov.out_dir, config.out_dir);

    const double T = config.sim_T.value_or(std::min(res.consts.T2, res.consts.T_star));
    const RealTimeOptimizer opt =
        config.variant == OptVariant::exact_newton
            ? RealTimeOptimizer(res.lq, OptVariant::exact_newton)
            : RealTimeOptimizer(res.lq, OptVariant::fixed_hessian_gradient, res.rho);

    Vec x0 = config.x0.value_or(Vec::Zero(res.lq.n_x));
    Vec u0 = config.u0.value_or(Vec::Zero(res.lq.n_u));
    const CoupledState state0{x0, res.lq.complete_point(x0, u0)};
    const ContinuousModel plant = ContinuousModel::from_lti(res.lq.model);

    const Trajectory traj =
        rollout(plant, opt, state0, T, config.sim_N, config.error_space);
    write_trajectory_csv((fs::path(dir) / "trajectory.csv").string(), traj);

    if (traj.diverged) {
      // export what we have, then report the blow-up
      throw BlowUpError("trajectory diverged", traj.blow_up_step);
    }

    const DominationReport rep = domination_check(traj, res.consts, T);
    write_domination_csv((fs::path(dir) / "aux_domination.csv").string(), traj, rep);
    if (!ov.quiet) {
      std::cout << (rep.pass ? "domination: PASS" : "domination: FAIL") << " over "
                << traj.samples.size() - 1 << " steps at T = " << detail::fmt17(T);
      if (!rep.pass) std::cout << " (first failure at k = " << rep.first_failure << ")";
      std::cout << '\n';
    }
    return kExitOk;
  });
}

int run_repro_example(const Overrides& ov) {
  return guarded([&] {
    ProblemConfig config = default_config();
    apply_overrides(config, ov);
    const std::string root = resolve_out_dir(ov.out_dir, config.out_dir);
    const std::string dir = (fs::path(root) / "repro_example").string();

    const PipelineResult res = run_certification(config);
    const int code = certify_into(res, dir, ov.quiet);
    if (code != kExitOk) return code;

    const double T =
        config.sim_T.value_or(std::min(res.consts.T2, res.consts.T_star));
    const RealTimeOptimizer opt(res.lq, OptVariant::fixed_hessian_gradient, res.rho);
    const CoupledState state0{*config.x0, res.lq.complete_point(*config.x0, *config.u0)};
    const Trajectory traj = rollout(ContinuousModel::from_lti(res.lq.model), opt, state0,
                                    T, config.sim_N, config.error_space);
    write_trajectory_csv((fs::path(dir) / "trajectory.csv").string(), traj);
    if (traj.diverged) throw BlowUpError("trajectory diverged", traj.blow_up_step);
    if (!ov.quiet)
      std::cout << "rollout at T = " << detail::fmt17(T) << " written to " << dir << '\n';
    return kExitOk;
  });
}

}  // namespace rtnmpc::cli
