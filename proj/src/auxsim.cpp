#include "rtnmpc/auxsim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtnmpc/errors.hpp"
#include "fmtio.hpp"

namespace rtnmpc {

namespace {
constexpr double kMarginTol = 1e-9;
}

AuxState aux_step(const AuxState& state, const CertifiedConstants& consts, double T) {
  const AuxMatrix A = aux_matrix(consts, T);
  return AuxState{A.a11 * state.nu + A.a12 * state.epsilon,
                  A.a21 * state.nu + A.a22 * state.epsilon};
}

std::vector<AuxState> aux_rollout(const AuxState& state0, const CertifiedConstants& consts,
                                  double T, long N) {
  std::vector<AuxState> out;
  out.reserve(N + 1);
  out.push_back(state0);
  AuxState s = state0;
  for (long k = 0; k < N; ++k) {
    s = aux_step(s, consts, T);
    out.push_back(s);
  }
  return out;
}

DominationReport domination_check(const Trajectory& traj, const CertifiedConstants& consts,
                                  double T, std::optional<AuxState> init) {
  if (traj.samples.empty())
    throw Error("domination_check: trajectory lacks V/E records");
  DominationReport rep;
  rep.a1_tilde = std::min(consts.a1, 1.0);
  rep.pass = true;
  rep.norm_bound_pass = true;

  AuxState aux = init.value_or(AuxState{traj.samples.front().sqrtV, traj.samples.front().E});
  const AuxMatrix A = aux_matrix(consts, T);
  const double a1_scale = 1.0 / std::sqrt(rep.a1_tilde);

  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    rep.nu.push_back(aux.nu);
    rep.epsilon.push_back(aux.epsilon);
    rep.margin_nu.push_back(aux.nu - s.sqrtV);
    rep.margin_eps.push_back(aux.epsilon - s.E);
    // ||xi_k|| <= a1_tilde^{-1/2} ||chi_k||
    const double xi = std::sqrt(s.x.squaredNorm() + s.E * s.E);
    const double chi = std::hypot(aux.nu, aux.epsilon);
    rep.xi_norm.push_back(xi);
    rep.chi_norm_scaled.push_back(a1_scale * chi);
    const bool step_ok =
        rep.margin_nu.back() >= -kMarginTol && rep.margin_eps.back() >= -kMarginTol;
    if (!step_ok && rep.pass) {
      rep.pass = false;
      rep.first_failure = static_cast<long>(k);
    }
    if (step_ok && xi > a1_scale * chi + kMarginTol) rep.norm_bound_pass = false;
    aux = AuxState{A.a11 * aux.nu + A.a12 * aux.epsilon,
                   A.a21 * aux.nu + A.a22 * aux.epsilon};
  }
  return rep;
}

void write_domination_csv(const std::string& path, const Trajectory& traj,
                          const DominationReport& rep) {
  std::ostringstream out;
  out << "k,nu,epsilon,sqrtV,E,margin_nu,margin_eps\n";
  for (std::size_t k = 0; k < rep.nu.size(); ++k) {
    const auto& s = traj.samples[k];
    out << s.k << ',' << detail::fmt17(rep.nu[k]) << ',' << detail::fmt17(rep.epsilon[k])
        << ',' << detail::fmt17(s.sqrtV) << ',' << detail::fmt17(s.E) << ','
        << detail::fmt17(rep.margin_nu[k]) << ',' << detail::fmt17(rep.margin_eps[k])
        << '\n';
  }
  detail::atomic_write(path, out.str());
}

}  // namespace rtnmpc
