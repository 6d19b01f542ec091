#include "rtnmpc/coupled.hpp"

#include <cmath>
#include <sstream>

#include "rtnmpc/errors.hpp"
#include "fmtio.hpp"

namespace rtnmpc {

namespace {

constexpr double kDivergenceNorm = 1e12;

Vec rk4_step(const std::function<Vec(const Vec&, const Vec&)>& f, const Vec& x,
             const Vec& u, double h) {
  const Vec k1 = f(x, u);
  const Vec k2 = f(x + 0.5 * h * k1, u);
  const Vec k3 = f(x + 0.5 * h * k2, u);
  const Vec k4 = f(x + h * k3, u);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vec system_step(const ContinuousModel& model, const Vec& x, const Vec& u, double T) {
  if (!(T > 0.0)) throw DomainError("system_step requires T > 0");
  if (model.lti) {
    const DiscreteLTI d = discretize_exact(*model.lti, T);
    Vec next = d.A_T * x + d.B_T * u;
    if (!next.allFinite()) throw BlowUpError("system_step: non-finite state", 0);
    return next;
  }
  if (!model.dynamics) throw ConfigError("ContinuousModel has neither LTI data nor dynamics");
  const long substeps = static_cast<long>(std::ceil(T / model.h_max));
  const double h = T / static_cast<double>(substeps);
  Vec cur = x;
  for (long i = 0; i < substeps; ++i) {
    cur = rk4_step(model.dynamics, cur, u, h);
    if (!cur.allFinite())
      throw BlowUpError("system_step: non-finite state during integration", i);
  }
  return cur;
}

CoupledState coupled_step(const ContinuousModel& model, const RealTimeOptimizer& opt,
                          const CoupledState& state, double T) {
  // plant first, under the current approximate input; then one optimizer
  // iteration at the new state
  const Vec u = opt.problem().input_of(state.z);
  const Vec x_next = system_step(model, state.x, u, T);
  return CoupledState{x_next, opt.step(state.z, x_next)};
}

Trajectory rollout(const ContinuousModel& model, const RealTimeOptimizer& opt,
                   const CoupledState& state0, double T, long N, ErrorSpace error_space) {
  if (N < 1) throw DomainError("rollout requires N >= 1");
  const NlpProblem& p = opt.problem();

  // the LTI map does not depend on the step index; discretize once
  std::optional<DiscreteLTI> disc;
  if (model.lti) disc = discretize_exact(*model.lti, T);

  Trajectory traj;
  traj.samples.reserve(N + 1);
  CoupledState state = state0;

  const auto record = [&](long k) -> bool {
    if (!state.x.allFinite() || state.x.norm() > kDivergenceNorm) return false;
    Solution sol;
    try {
      sol = solve_exact(p, state.x, state.z);
    } catch (const Error&) {
      // the exact-solution oracle breaks down once the iterate leaves the
      // certifiable scale; treat that as a blow-up, not a hard failure
      return false;
    }
    TrajectorySample s;
    s.k = k;
    s.t = static_cast<double>(k) * T;
    s.x = state.x;
    s.u = p.input_of(state.z);
    s.z = state.z;
    s.V = sol.V;
    s.E = error_space == ErrorSpace::u0
              ? (p.input_of(state.z) - p.input_of(sol.z_bar)).norm()
              : (state.z.z() - sol.z_bar.z()).norm();
    if (!std::isfinite(s.E) || s.E > kDivergenceNorm) return false;
    s.sqrtV = std::sqrt(std::max(s.V, 0.0));
    traj.samples.push_back(std::move(s));
    return true;
  };

  if (!record(0)) {
    traj.diverged = true;
    traj.blow_up_step = 0;
    return traj;
  }
  for (long k = 1; k <= N; ++k) {
    try {
      if (disc) {
        const Vec u = p.input_of(state.z);
        const Vec x_next = disc->A_T * state.x + disc->B_T * u;
        if (!x_next.allFinite()) throw BlowUpError("rollout: non-finite state", k);
        state = CoupledState{x_next, opt.step(state.z, x_next)};
      } else {
        state = coupled_step(model, opt, state, T);
      }
    } catch (const BlowUpError&) {
      traj.diverged = true;
      traj.blow_up_step = k;
      return traj;
    }
    if (!record(k)) {
      traj.diverged = true;
      traj.blow_up_step = k;
      return traj;
    }
  }
  return traj;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream out;
  if (traj.samples.empty()) throw Error("write_trajectory_csv: empty trajectory");
  const Eigen::Index n_x = traj.samples.front().x.size();
  const Eigen::Index n_u = traj.samples.front().u.size();
  out << "k,t";
  for (Eigen::Index i = 0; i < n_x; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < n_u; ++i) out << ",u" << i;
  out << ",V,E,sqrtV\n";
  for (const auto& s : traj.samples) {
    out << s.k << ',' << detail::fmt17(s.t);
    for (Eigen::Index i = 0; i < n_x; ++i) out << ',' << detail::fmt17(s.x(i));
    for (Eigen::Index i = 0; i < n_u; ++i) out << ',' << detail::fmt17(s.u(i));
    out << ',' << detail::fmt17(s.V) << ',' << detail::fmt17(s.E) << ','
        << detail::fmt17(s.sqrtV) << '\n';
  }
  detail::atomic_write(path, out.str());
}

}  // namespace rtnmpc
