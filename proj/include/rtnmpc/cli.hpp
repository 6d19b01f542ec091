#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rtnmpc::cli {

// Exit codes are a total function of the outcome class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitCertificationFailure = 2;
inline constexpr int kExitDivergence = 3;

struct Overrides {
  std::optional<double> T;
  std::optional<double> rho;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// certify: certificate + both sweep CSVs.
int run_certify(const std::string& config_path, const Overrides& ov);

/// sweep: eigs_vs_T.csv and lyap_vs_T.csv over the configured grid.
int run_sweep(const std::string& config_path, const Overrides& ov);

/// simulate: trajectory + domination CSVs + a pass/fail summary line.
int run_simulate(const std::string& config_path, const Overrides& ov);

/// repro-example: one-shot double-integrator study into <out>/repro_example.
int run_repro_example(const Overrides& ov);

/// --out flag, config value, RTNMPC_OUT, "." in that order.
std::string resolve_out_dir(const std::optional<std::string>& flag_value,
                            const std::optional<std::string>& config_value);

}  // namespace rtnmpc::cli
