#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtnmpc/auxsim.hpp"
#include "rtnmpc/certify.hpp"
#include "rtnmpc/errors.hpp"
#include "rtnmpc/pipeline.hpp"

namespace py = pybind11;
using namespace rtnmpc;

namespace {

py::dict constants_dict(const CertifiedConstants& c) {
  py::dict d;
  d["a1"] = c.a1;
  d["a2"] = c.a2;
  d["a3"] = c.a3;
  d["a_bar"] = c.a_bar;
  d["mu"] = c.mu;
  d["sigma"] = c.sigma;
  d["kappa_hat"] = c.kappa_hat;
  d["L_psi_x"] = c.L_psi_x;
  d["L_psi_u"] = c.L_psi_u;
  d["eta"] = c.eta;
  d["theta"] = c.theta;
  d["gamma"] = c.gamma;
  d["gamma_hat"] = c.gamma_hat;
  d["r_z"] = c.r_z;
  d["r_x"] = c.r_x;
  d["r_q"] = c.r_q;
  d["r_q_tilde"] = c.r_q_tilde;
  d["V_bar"] = c.V_bar;
  d["V_bar_q"] = c.V_bar_q;
  d["r_V_bar"] = c.r_V_bar;
  d["T0"] = c.T0;
  d["T1"] = c.T1;
  d["T2"] = c.T2;
  d["T_star"] = c.T_star;
  d["T_star_crossing_found"] = c.T_star_crossing_found;
  d["seed"] = c.seed;
  return d;
}

Mat curve2_matrix(const std::vector<std::array<double, 2>>& curve) {
  Mat out(curve.size(), 2);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out(i, 0) = curve[i][0];
    out(i, 1) = curve[i][1];
  }
  return out;
}

Mat curve3_matrix(const std::vector<std::array<double, 3>>& curve) {
  Mat out(curve.size(), 3);
  for (std::size_t i = 0; i < curve.size(); ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = curve[i][j];
  return out;
}

py::dict certify_impl(const ProblemConfig& config) {
  const PipelineResult res = run_certification(config);
  py::dict d = constants_dict(res.consts);
  d["rho"] = res.rho;
  d["P"] = res.lq.P.P;
  d["dare_residual"] = res.lq.P.residual;
  d["H"] = res.lq.H;
  d["G"] = res.lq.G;
  d["K"] = res.lq.K;
  d["lyap_curve"] = curve2_matrix(res.lyap.curve);
  d["eig_curve"] = curve3_matrix(res.eig_curve);
  return d;
}

py::dict simulate_impl(const ProblemConfig& config) {
  const PipelineResult res = run_certification(config);
  const double T = config.sim_T.value_or(std::min(res.consts.T2, res.consts.T_star));
  const RealTimeOptimizer opt =
      config.variant == OptVariant::exact_newton
          ? RealTimeOptimizer(res.lq, OptVariant::exact_newton)
          : RealTimeOptimizer(res.lq, OptVariant::fixed_hessian_gradient, res.rho);
  const Vec x0 = config.x0.value_or(Vec::Zero(res.lq.n_x));
  const Vec u0 = config.u0.value_or(Vec::Zero(res.lq.n_u));
  const Trajectory traj =
      rollout(ContinuousModel::from_lti(res.lq.model), opt,
              CoupledState{x0, res.lq.complete_point(x0, u0)}, T, config.sim_N,
              config.error_space);

  const long n = static_cast<long>(traj.samples.size());
  Mat x(n, res.lq.n_x), u(n, res.lq.n_u);
  Vec V(n), E(n), sqrtV(n), t(n);
  for (long i = 0; i < n; ++i) {
    const auto& s = traj.samples[i];
    x.row(i) = s.x.transpose();
    u.row(i) = s.u.transpose();
    V(i) = s.V;
    E(i) = s.E;
    sqrtV(i) = s.sqrtV;
    t(i) = s.t;
  }
  py::dict d;
  d["T"] = T;
  d["t"] = t;
  d["x"] = x;
  d["u"] = u;
  d["V"] = V;
  d["E"] = E;
  d["sqrtV"] = sqrtV;
  d["diverged"] = traj.diverged;
  d["blow_up_step"] = traj.blow_up_step;
  if (!traj.diverged && n > 0) {
    const DominationReport rep = domination_check(traj, res.consts, T);
    d["domination_pass"] = rep.pass;
    d["margin_nu"] = Vec(Eigen::Map<const Vec>(rep.margin_nu.data(), n));
    d["margin_eps"] = Vec(Eigen::Map<const Vec>(rep.margin_eps.data(), n));
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stability certification for real-time equality-constrained NMPC";

  py::register_exception<Error>(m, "RtnmpcError", PyExc_RuntimeError);

  m.def("matrix_exponential", &matrix_exponential, py::arg("m"),
        "exp(M) by scaling-and-squaring");

  m.def(
      "discretize_exact",
      [](const Mat& A_c, const Mat& B_c, double T) {
        const ContinuousLTI model(A_c, B_c, Mat::Identity(A_c.rows(), A_c.rows()),
                                  Mat::Identity(B_c.cols(), B_c.cols()));
        const DiscreteLTI d = discretize_exact(model, T);
        return py::make_tuple(d.A_T, d.B_T);
      },
      py::arg("A_c"), py::arg("B_c"), py::arg("T"),
      "Zero-order-hold discretization: returns (A_T, B_T)");

  m.def(
      "solve_dare",
      [](const Mat& A, const Mat& B, const Mat& Q, const Mat& R) {
        const ValueMatrix v = solve_dare(A, B, Q, R);
        return py::make_tuple(v.P, v.residual);
      },
      py::arg("A"), py::arg("B"), py::arg("Q"), py::arg("R"),
      "Fixed-point DARE solve: returns (P, residual)");

  m.def(
      "lqr_gain",
      [](const Mat& A, const Mat& B, const Mat& P, const Mat& R) {
        return lqr_gain(A, B, ValueMatrix{P, 0.0}, R);
      },
      py::arg("A"), py::arg("B"), py::arg("P"), py::arg("R"),
      "K = -(R + B'PB)^{-1} B'PA");

  m.def(
      "aux_eigenvalues",
      [](double a_bar, double mu, double gamma_hat, double kappa_hat, double sigma,
         double theta, double T) {
        CertifiedConstants c;
        c.a_bar = a_bar;
        c.mu = mu;
        c.gamma_hat = gamma_hat;
        c.kappa_hat = kappa_hat;
        c.sigma = sigma;
        c.theta = theta;
        const auto [l1, l2] = aux_eigenvalues(aux_matrix(c, T));
        return py::make_tuple(l1, l2);
      },
      py::arg("a_bar"), py::arg("mu"), py::arg("gamma_hat"), py::arg("kappa_hat"),
      py::arg("sigma"), py::arg("theta"), py::arg("T"),
      "Eigenvalues of the auxiliary matrix at sampling time T");

  m.def(
      "default_config_text", [] { return serialize_config(default_config()); },
      "Configuration of the built-in double-integrator study");

  m.def(
      "certify",
      [](const std::string& config_text) {
        return certify_impl(parse_config_text(config_text));
      },
      py::arg("config_text"),
      "Run the certification pipeline on a JSON configuration; returns every "
      "constant of the stability chain plus the sweep curves");

  m.def(
      "simulate",
      [](const std::string& config_text) {
        return simulate_impl(parse_config_text(config_text));
      },
      py::arg("config_text"),
      "Roll out the coupled system-optimizer dynamics and check domination "
      "by the auxiliary dynamics");
}
