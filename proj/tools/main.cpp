#include <CLI11.hpp>

#include "rtnmpc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Real-time NMPC stability certification"};
  app.require_subcommand(1);

  std::string config_path;
  rtnmpc::cli::Overrides ov;
  double T_flag = 0.0, rho_flag = 0.0;
  std::string out_flag;
  std::uint64_t seed_flag = 0;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", config_path, "configuration file (JSON, comments allowed)")
          ->required();
    sub->add_option("--out", out_flag, "output directory (default: config, then $RTNMPC_OUT)");
    sub->add_option("--seed", seed_flag, "override the sampling seed");
    sub->add_option("--T", T_flag, "override the simulation sampling time");
    sub->add_option("--rho", rho_flag, "override the fixed-Hessian weight rho");
    sub->add_flag("--quiet", ov.quiet, "suppress progress output");
  };

  CLI::App* certify = app.add_subcommand("certify", "estimate constants and write a certificate");
  CLI::App* sweep = app.add_subcommand("sweep", "write eigenvalue and decrease-rate sweeps");
  CLI::App* simulate = app.add_subcommand("simulate", "roll out the coupled dynamics");
  CLI::App* repro = app.add_subcommand("repro-example", "run the built-in double-integrator study");
  add_common(certify, true);
  add_common(sweep, true);
  add_common(simulate, true);
  add_common(repro, false);

  CLI11_PARSE(app, argc, argv);

  const auto fill = [&](const CLI::App* sub) {
    if (sub->count("--T")) ov.T = T_flag;
    if (sub->count("--rho")) ov.rho = rho_flag;
    if (sub->count("--out")) ov.out_dir = out_flag;
    if (sub->count("--seed")) ov.seed = seed_flag;
  };

  if (certify->parsed()) {
    fill(certify);
    return rtnmpc::cli::run_certify(config_path, ov);
  }
  if (sweep->parsed()) {
    fill(sweep);
    return rtnmpc::cli::run_sweep(config_path, ov);
  }
  if (simulate->parsed()) {
    fill(simulate);
    return rtnmpc::cli::run_simulate(config_path, ov);
  }
  fill(repro);
  return rtnmpc::cli::run_repro_example(ov);
}
