#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtnmpc/certify.hpp"

namespace rtnmpc {

/// State of the auxiliary dynamics; nu tracks sqrt(V), epsilon tracks E.
struct AuxState {
  double nu;
  double epsilon;
};

/// One step of the auxiliary linear dynamics:
///   nu+      = (1 - T a_bar)^{1/2} nu + (T mu)^{1/2} epsilon
///   epsilon+ = T gamma_hat nu + kappa(T) epsilon
AuxState aux_step(const AuxState& state, const CertifiedConstants& consts, double T);

std::vector<AuxState> aux_rollout(const AuxState& state0, const CertifiedConstants& consts,
                                  double T, long N);

/// Per-step comparison of an auxiliary rollout against a recorded coupled
/// trajectory.
struct DominationReport {
  std::vector<double> nu, epsilon;          ///< auxiliary rollout
  std::vector<double> margin_nu;            ///< nu_k - sqrt(V_k)
  std::vector<double> margin_eps;           ///< epsilon_k - E_k
  std::vector<double> xi_norm;              ///< ||(x_k, z_k - z_bar(x_k))||
  std::vector<double> chi_norm_scaled;      ///< a1_tilde^{-1/2} ||(nu_k, eps_k)||
  double a1_tilde;                          ///< min{a1, 1}
  bool pass;                                ///< all margins >= -1e-9
  bool norm_bound_pass;                     ///< xi_norm <= chi_norm_scaled + 1e-9
  long first_failure = -1;
};

/// Runs the auxiliary dynamics alongside traj and reports per-step margins.
/// By default the auxiliary state starts compatible, (nu0, eps0) =
/// (sqrt(V0), E0); an explicit init overrides that (e.g. to demonstrate that
/// an incompatible start is detected).
DominationReport domination_check(const Trajectory& traj, const CertifiedConstants& consts,
                                  double T, std::optional<AuxState> init = std::nullopt);

/// CSV export: k,nu,epsilon,sqrtV,E,margin_nu,margin_eps.
void write_domination_csv(const std::string& path, const Trajectory& traj,
                          const DominationReport& report);

}  // namespace rtnmpc
