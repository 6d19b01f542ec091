#pragma once

#include <algorithm>
#include <functional>

#include "rtnmpc/linalg.hpp"
#include "rtnmpc/linmodel.hpp"

namespace rtnmpc {

/// Primal-dual point z = (y, lambda) of an equality-constrained NLP.
struct KktPoint {
  Vec y;
  Vec lambda;

  Vec z() const;
  static KktPoint from_z(const Vec& z, Eigen::Index n, Eigen::Index n_g);
  static KktPoint zero(Eigen::Index n, Eigen::Index n_g);
};

/// Parametric equality-constrained NLP
///   min_y f(y)   s.t.   g(y) + B x = 0.
///
/// Value callbacks are mandatory; derivative callbacks are optional and fall
/// back to central finite differences with step fd_step. hess_g_lambda(y, l)
/// is the constraint curvature sum_i l_i * hess(g_i)(y).
struct NlpProblem {
  Eigen::Index n = 0;    ///< primal dimension
  Eigen::Index n_g = 0;  ///< constraint dimension
  Eigen::Index n_x = 0;  ///< parameter dimension

  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> g;
  Mat B;  ///< n_g x n_x

  std::function<Vec(const Vec&)> grad_f;
  std::function<Mat(const Vec&)> hess_f;
  std::function<Mat(const Vec&)> jac_g;
  std::function<Mat(const Vec&, const Vec&)> hess_g_lambda;

  double fd_step = 1e-6;

  /// Step for finite-difference curvature; wider than fd_step so that the
  /// noise of a differenced gradient does not dominate the quotient.
  double hess_fd_step() const { return std::max(fd_step, 1e-4); }

  /// Position and width of the u0 block inside y; defines the projection
  /// M_{u,z} that extracts the applied input from an iterate (a coordinate
  /// selector, so its spectral norm is 1).
  Eigen::Index u_offset = 0;
  Eigen::Index n_u = 0;

  Vec eval_grad_f(const Vec& y) const;
  Mat eval_hess_f(const Vec& y) const;
  Mat eval_jac_g(const Vec& y) const;
  Mat eval_hess_g_lambda(const Vec& y, const Vec& lambda) const;

  /// C = [0; B], stacked so F(z) + Cx has n + n_g rows.
  Mat C() const;

  Vec input_of(const KktPoint& z) const;

  void validate() const;
};

/// Exact solution record returned by solve_exact.
struct Solution {
  KktPoint z_bar;
  Vec x;
  double kkt_norm = 0.0;
  double V = 0.0;  ///< f at the primal solution
  long iterations = 0;
};

/// F(z) + Cx with F(z) = (grad f(y) + jac_g(y)' lambda, g(y)).
Vec kkt_residual(const NlpProblem& problem, const KktPoint& z, const Vec& x);

struct SolveOptions {
  double tol = 1e-10;
  long max_iter = 100;
};

/// Full-step Newton iteration on F(z) + Cx = 0. No globalization: a singular
/// KKT matrix raises RegularityError, hitting the cap raises ConvergenceError.
Solution solve_exact(const NlpProblem& problem, const Vec& x, const KktPoint& z0,
                     const SolveOptions& opts = {});

/// V(x) = f(y_bar(x)).
double value_function(const NlpProblem& problem, const Vec& x);

/// Multiple-shooting transcription of the infinite-horizon LQ problem over a
/// single shooting interval of length T_d, with Riccati terminal cost:
///
///   min  T_d (s0'Q_c s0 + u0'R_c u0) + s1'P s1
///   s.t. s0 - x = 0,   s1 = A_{T_d} s0 + B_{T_d} u0
///
/// plus its condensed optimality system H u0 + G x = 0.
struct LqNlp {
  ContinuousLTI model;
  double T_d;
  DiscreteLTI disc;  ///< discretized at T_d
  ValueMatrix P;
  Mat H;  ///< T_d R_c + B'PB (or the literal variant, see build_lq_nlp)
  Mat G;  ///< B'PA
  Mat K;  ///< -H^{-1}G
  NlpProblem problem;
  Eigen::Index n_x;
  Eigen::Index n_u;

  /// u0_bar(x) = -H^{-1} G x.
  Vec condensed_input(const Vec& x) const;

  /// Rebuild a full primal-dual point from (x, u0): the primal part is the
  /// feasible completion (s0 = x, s1 = A s0 + B u0), the multipliers solve
  /// the stationarity equations in the least-squares sense.
  KktPoint complete_point(const Vec& x, const Vec& u0) const;
};

/// paper_literal_h switches H to T_d*(T_d R_c) + B'PB, the formula obtained
/// by reading the condensed system's "T_d R" with R already containing a T_d
/// factor; with it the condensed solution no longer matches the full KKT
/// solution, which is why the OCP-consistent H above is the default.
LqNlp build_lq_nlp(const ContinuousLTI& model, double T_d, bool paper_literal_h = false);

}  // namespace rtnmpc
