#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rtnmpc/rtopt.hpp"

namespace rtnmpc {

/// Plant model: either an LTI block (stepped with the exact discrete map) or
/// a general vector field integrated with fixed-step RK4.
struct ContinuousModel {
  std::optional<ContinuousLTI> lti;
  std::function<Vec(const Vec&, const Vec&)> dynamics;
  double h_max = 1e-3;  ///< RK4 substep cap for the nonlinear path

  static ContinuousModel from_lti(ContinuousLTI m) {
    ContinuousModel out;
    out.lti = std::move(m);
    return out;
  }
};

/// Joint state of the interconnection: plant state and optimizer iterate.
struct CoupledState {
  Vec x;
  KktPoint z;
};

/// Which norm the numerical error E is measured in.
enum class ErrorSpace {
  u0,  ///< |u0 - u0_bar(x)|, the condensed analysis space
  z,   ///< ||z - z_bar(x)|| over the full primal-dual vector
};

struct TrajectorySample {
  long k;
  double t;
  Vec x;
  Vec u;
  KktPoint z;
  double V;
  double E;
  double sqrtV;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool diverged = false;
  long blow_up_step = -1;
};

/// x_next = psi(T; x, u) with u held constant over [0, T].
Vec system_step(const ContinuousModel& model, const Vec& x, const Vec& u, double T);

/// One step of the coupled system-optimizer dynamics: the plant moves first
/// under the current approximate input, then the optimizer iterates once at
/// the new state.
CoupledState coupled_step(const ContinuousModel& model, const RealTimeOptimizer& opt,
                          const CoupledState& state, double T);

/// N steps of the coupled dynamics; V_k and E_k are evaluated by re-solving
/// the NLP exactly at every sample. A blow-up truncates the trajectory and
/// marks it diverged instead of throwing.
Trajectory rollout(const ContinuousModel& model, const RealTimeOptimizer& opt,
                   const CoupledState& state0, double T, long N,
                   ErrorSpace error_space = ErrorSpace::u0);

/// CSV export: header k,t,x...,u...,V,E,sqrtV with 17 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace rtnmpc
