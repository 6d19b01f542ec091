#include "rtnmpc/nlp.hpp"

#include <string>
#include <utility>

#include "rtnmpc/errors.hpp"

namespace rtnmpc {

Vec KktPoint::z() const {
  Vec out(y.size() + lambda.size());
  out << y, lambda;
  return out;
}

KktPoint KktPoint::from_z(const Vec& z, Eigen::Index n, Eigen::Index n_g) {
  if (z.size() != n + n_g) throw DimensionError("KktPoint: z has wrong length");
  return KktPoint{z.head(n), z.tail(n_g)};
}

KktPoint KktPoint::zero(Eigen::Index n, Eigen::Index n_g) {
  return KktPoint{Vec::Zero(n), Vec::Zero(n_g)};
}

Vec NlpProblem::eval_grad_f(const Vec& y) const {
  if (grad_f) return grad_f(y);
  Vec out(n);
  Vec p = y;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = y(i) + fd_step;
    const double fp = f(p);
    p(i) = y(i) - fd_step;
    const double fm = f(p);
    p(i) = y(i);
    out(i) = (fp - fm) / (2.0 * fd_step);
  }
  return out;
}

Mat NlpProblem::eval_hess_f(const Vec& y) const {
  if (hess_f) return hess_f(y);
  // central difference of the gradient, symmetrized; the wider step keeps
  // the noise of a nested finite-difference gradient out of the curvature
  const double h = hess_fd_step();
  Mat out(n, n);
  Vec p = y;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = y(i) + h;
    const Vec gp = eval_grad_f(p);
    p(i) = y(i) - h;
    const Vec gm = eval_grad_f(p);
    p(i) = y(i);
    out.col(i) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

Mat NlpProblem::eval_jac_g(const Vec& y) const {
  if (jac_g) return jac_g(y);
  Mat out(n_g, n);
  Vec p = y;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = y(i) + fd_step;
    const Vec gp = g(p);
    p(i) = y(i) - fd_step;
    const Vec gm = g(p);
    p(i) = y(i);
    out.col(i) = (gp - gm) / (2.0 * fd_step);
  }
  return out;
}

Mat NlpProblem::eval_hess_g_lambda(const Vec& y, const Vec& lambda) const {
  if (hess_g_lambda) return hess_g_lambda(y, lambda);
  const double h = hess_fd_step();
  Mat out(n, n);
  Vec p = y;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = y(i) + h;
    const Vec cp = eval_jac_g(p).transpose() * lambda;
    p(i) = y(i) - h;
    const Vec cm = eval_jac_g(p).transpose() * lambda;
    p(i) = y(i);
    out.col(i) = (cp - cm) / (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

Mat NlpProblem::C() const {
  Mat c = Mat::Zero(n + n_g, n_x);
  c.bottomRows(n_g) = B;
  return c;
}

Vec NlpProblem::input_of(const KktPoint& z) const {
  if (n_u == 0) throw ConfigError("NlpProblem: input block (u_offset, n_u) not set");
  return z.y.segment(u_offset, n_u);
}

void NlpProblem::validate() const {
  if (!f || !g) throw ConfigError("NlpProblem: f and g callbacks are required");
  if (n <= 0 || n_g < 0 || n_x <= 0) throw DimensionError("NlpProblem: bad dimensions");
  if (B.rows() != n_g || B.cols() != n_x)
    throw DimensionError("NlpProblem: B must be n_g x n_x");
  if (n_u > 0 && u_offset + n_u > n)
    throw DimensionError("NlpProblem: input block exceeds primal dimension");
}

Vec kkt_residual(const NlpProblem& problem, const KktPoint& z, const Vec& x) {
  if (z.y.size() != problem.n || z.lambda.size() != problem.n_g)
    throw DimensionError("kkt_residual: z has wrong block sizes");
  if (x.size() != problem.n_x) throw DimensionError("kkt_residual: x has wrong length");
  Vec res(problem.n + problem.n_g);
  res.head(problem.n) =
      problem.eval_grad_f(z.y) + problem.eval_jac_g(z.y).transpose() * z.lambda;
  res.tail(problem.n_g) = problem.g(z.y) + problem.B * x;
  return res;
}

Solution solve_exact(const NlpProblem& problem, const Vec& x, const KktPoint& z0,
                     const SolveOptions& opts) {
  KktPoint z = z0;
  Vec res = kkt_residual(problem, z, x);
  double res_norm = res.norm();
  long it = 0;
  while (res_norm > opts.tol) {
    if (it >= opts.max_iter)
      throw ConvergenceError("solve_exact: Newton iteration cap reached, residual " +
                             std::to_string(res_norm));
    const Eigen::Index n = problem.n, n_g = problem.n_g;
    Mat kkt = Mat::Zero(n + n_g, n + n_g);
    const Mat J = problem.eval_jac_g(z.y);
    kkt.topLeftCorner(n, n) =
        problem.eval_hess_f(z.y) + problem.eval_hess_g_lambda(z.y, z.lambda);
    kkt.topRightCorner(n, n_g) = J.transpose();
    kkt.bottomLeftCorner(n_g, n) = J;
    Eigen::FullPivLU<Mat> lu(kkt);
    if (!lu.isInvertible())
      throw RegularityError("solve_exact: singular KKT matrix (regularity violated)");
    const Vec dz = lu.solve(-res);
    z.y += dz.head(n);
    z.lambda += dz.tail(n_g);
    ++it;
    res = kkt_residual(problem, z, x);
    res_norm = res.norm();
    if (!std::isfinite(res_norm))
      throw ConvergenceError("solve_exact: iteration produced non-finite residual");
  }
  return Solution{z, x, res_norm, problem.f(z.y), it};
}

double value_function(const NlpProblem& problem, const Vec& x) {
  return solve_exact(problem, x, KktPoint::zero(problem.n, problem.n_g)).V;
}

Vec LqNlp::condensed_input(const Vec& x) const {
  return -Eigen::FullPivLU<Mat>(H).solve(G * x);
}

KktPoint LqNlp::complete_point(const Vec& x, const Vec& u0) const {
  Vec y(problem.n);
  y.head(n_x) = x;
  y.segment(n_x, n_x) = disc.A_T * x + disc.B_T * u0;
  y.tail(n_u) = u0;
  // stationarity residual grad_f(y) + J' lambda = 0 in the least-squares sense
  const Mat Jt = problem.eval_jac_g(y).transpose();
  const Vec lambda = Jt.colPivHouseholderQr().solve(-problem.eval_grad_f(y));
  return KktPoint{y, lambda};
}

LqNlp build_lq_nlp(const ContinuousLTI& model, double T_d, bool paper_literal_h) {
  if (!(T_d > 0.0)) throw DomainError("build_lq_nlp requires T_d > 0");
  const Eigen::Index n_x = model.state_dim();
  const Eigen::Index n_u = model.input_dim();

  LqNlp lq{model, T_d, discretize_exact(model, T_d), ValueMatrix{}, Mat(), Mat(),
           Mat(), NlpProblem{}, n_x, n_u};
  lq.P = solve_dare(lq.disc.A_T, lq.disc.B_T, T_d * model.Q_c, T_d * model.R_c);

  const Mat& A = lq.disc.A_T;
  const Mat& Bd = lq.disc.B_T;
  const Mat R_eff = paper_literal_h ? Mat(T_d * T_d * model.R_c) : Mat(T_d * model.R_c);
  lq.H = R_eff + Bd.transpose() * lq.P.P * Bd;
  lq.G = Bd.transpose() * lq.P.P * A;
  lq.K = -Eigen::FullPivLU<Mat>(lq.H).solve(lq.G);

  // y = (s0, s1, u0); constraints (s0 - x, s1 - A s0 - B u0)
  NlpProblem& p = lq.problem;
  p.n = 2 * n_x + n_u;
  p.n_g = 2 * n_x;
  p.n_x = n_x;
  p.u_offset = 2 * n_x;
  p.n_u = n_u;
  p.B = Mat::Zero(p.n_g, n_x);
  p.B.topLeftCorner(n_x, n_x) = -Mat::Identity(n_x, n_x);

  const Mat Qc = model.Q_c, Rc = model.R_c, P = lq.P.P;
  p.f = [T_d, Qc, Rc, P, n_x, n_u](const Vec& y) {
    const Vec s0 = y.head(n_x), s1 = y.segment(n_x, n_x), u0 = y.tail(n_u);
    return T_d * (s0.dot(Qc * s0) + u0.dot(Rc * u0)) + s1.dot(P * s1);
  };
  p.grad_f = [T_d, Qc, Rc, P, n_x, n_u](const Vec& y) {
    Vec out(2 * n_x + n_u);
    out.head(n_x) = 2.0 * T_d * Qc * y.head(n_x);
    out.segment(n_x, n_x) = 2.0 * P * y.segment(n_x, n_x);
    out.tail(n_u) = 2.0 * T_d * Rc * y.tail(n_u);
    return out;
  };
  p.hess_f = [T_d, Qc, Rc, P, n_x, n_u](const Vec&) {
    Mat out = Mat::Zero(2 * n_x + n_u, 2 * n_x + n_u);
    out.topLeftCorner(n_x, n_x) = 2.0 * T_d * Qc;
    out.block(n_x, n_x, n_x, n_x) = 2.0 * P;
    out.bottomRightCorner(n_u, n_u) = 2.0 * T_d * Rc;
    return out;
  };
  const Mat Ad = A, Bdc = Bd;
  p.g = [Ad, Bdc, n_x, n_u](const Vec& y) {
    Vec out(2 * n_x);
    out.head(n_x) = y.head(n_x);
    out.tail(n_x) = y.segment(n_x, n_x) - Ad * y.head(n_x) - Bdc * y.tail(n_u);
    return out;
  };
  p.jac_g = [Ad, Bdc, n_x, n_u](const Vec&) {
    Mat out = Mat::Zero(2 * n_x, 2 * n_x + n_u);
    out.topLeftCorner(n_x, n_x) = Mat::Identity(n_x, n_x);
    out.block(n_x, 0, n_x, n_x) = -Ad;
    out.block(n_x, n_x, n_x, n_x) = Mat::Identity(n_x, n_x);
    out.bottomRightCorner(n_x, n_u) = -Bdc;
    return out;
  };
  p.hess_g_lambda = [n_x, n_u](const Vec&, const Vec&) {
    return Mat::Zero(2 * n_x + n_u, 2 * n_x + n_u);
  };
  p.validate();
  return lq;
}

}  // namespace rtnmpc
