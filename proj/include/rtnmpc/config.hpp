#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rtnmpc/coupled.hpp"
#include "rtnmpc/rtopt.hpp"

namespace rtnmpc {

/// Second-order-growth constant: closed LQ formula or sampled estimate.
enum class MuMode { lq, sampled };

/// Parsed batch configuration. The file format is JSON with // and /* */
/// comments allowed; see the README for the schema. Optional scalars left
/// unset are derived from the model (documented per field).
struct ProblemConfig {
  std::uint64_t seed = 0;

  // model block: a builtin name or explicit matrices
  std::string builtin;  ///< "double_integrator" or empty
  std::optional<Mat> A_c, B_c, Q_c, R_c;

  // discretization block
  double T_d = 0.1;

  // optimizer block
  OptVariant variant = OptVariant::fixed_hessian_gradient;
  std::optional<double> rho;  ///< absolute; wins over rho_scale
  double rho_scale = 1.5;     ///< rho = rho_scale * lambda_max(H)
  bool paper_literal_h = false;

  // region block
  double r_z = 1.0, r_x = 1.0, r_q = 1.0;
  std::optional<Vec> x_max;          ///< largest intended initial state
  double V_bar_scale = 1.5;          ///< V_bar = scale * V(x_max)
  std::optional<double> V_bar, V_bar_q, T0;

  // estimation block (grid behind a3, L_psi_x, L_psi_u)
  long est_grid_points = 40;
  std::optional<double> est_T_min;  ///< default T_d / 100
  MuMode mu_mode = MuMode::lq;
  long est_samples = 200;

  // sweep block (eigenvalue curves)
  std::optional<double> sweep_T_min, sweep_T_max;  ///< default (T_d/100, T_d]
  long sweep_points = 40;
  bool sweep_log = true;

  // simulation block
  std::optional<Vec> x0;
  std::optional<Vec> u0;
  long sim_N = 200;
  std::optional<double> sim_T;  ///< default min(T2, T_star)
  ErrorSpace error_space = ErrorSpace::u0;

  // output block
  std::optional<std::string> out_dir;

  ContinuousLTI make_model() const;
  void validate() const;
};

ProblemConfig parse_config_text(const std::string& text);
ProblemConfig parse_config_file(const std::string& path);

/// Canonical serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const ProblemConfig& c);

bool operator==(const ProblemConfig& a, const ProblemConfig& b);

/// The double-integrator configuration used throughout the examples.
ProblemConfig default_config();

}  // namespace rtnmpc
