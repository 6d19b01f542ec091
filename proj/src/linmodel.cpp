#include "rtnmpc/linmodel.hpp"

#include <cmath>
#include <string>

#include "rtnmpc/errors.hpp"

namespace rtnmpc {

namespace {

constexpr double kSymTol = 1e-10;

void require_finite(const Mat& m, const char* name) {
  if (!m.allFinite()) throw DomainError(std::string(name) + " has non-finite entries");
}

}  // namespace

ContinuousLTI::ContinuousLTI(Mat A, Mat B, Mat Q, Mat R)
    : A_c(std::move(A)), B_c(std::move(B)), Q_c(std::move(Q)), R_c(std::move(R)) {
  if (A_c.rows() != A_c.cols()) throw DimensionError("A_c must be square");
  if (B_c.rows() != A_c.rows())
    throw DimensionError("B_c must have as many rows as A_c");
  if (Q_c.rows() != A_c.rows() || Q_c.cols() != A_c.cols())
    throw DimensionError("Q_c must match the state dimension");
  if (R_c.rows() != B_c.cols() || R_c.cols() != B_c.cols())
    throw DimensionError("R_c must match the input dimension");
  require_finite(A_c, "A_c");
  require_finite(B_c, "B_c");
  if (!is_symmetric(Q_c, kSymTol)) throw DomainError("Q_c must be symmetric");
  if (!is_symmetric(R_c, kSymTol)) throw DomainError("R_c must be symmetric");
  if (lambda_min(Q_c) < -kSymTol)
    throw DomainError("Q_c must be positive semidefinite");
  if (lambda_min(R_c) <= 0.0) throw DomainError("R_c must be positive definite");
}

Mat matrix_exponential(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix_exponential needs a square matrix");
  require_finite(m, "matrix_exponential input");
  const Eigen::Index n = m.rows();
  if (n == 0) return Mat(0, 0);

  // Scale so ||A/2^s|| <= 1/2, run the series to a machine-precision term,
  // square back up.
  const double nrm = m.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm
  int s = 0;
  if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm))) + 1;
  const Mat a = m / std::pow(2.0, s);

  Mat x = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * a) / static_cast<double>(k);
    x += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * x.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < s; ++i) x = x * x;
  return x;
}

DiscreteLTI discretize_exact(const ContinuousLTI& model, double T) {
  if (!(T > 0.0)) throw DomainError("discretize_exact requires T > 0");
  const Eigen::Index n = model.state_dim();
  const Eigen::Index m = model.input_dim();
  Mat aug = Mat::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = model.A_c * T;
  aug.topRightCorner(n, m) = model.B_c * T;
  const Mat e = matrix_exponential(aug);
  return DiscreteLTI{e.topLeftCorner(n, n), e.topRightCorner(n, m), T};
}

ValueMatrix solve_dare(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
                       const DareOptions& opts) {
  if (A.rows() != A.cols()) throw DimensionError("DARE: A must be square");
  if (B.rows() != A.rows()) throw DimensionError("DARE: B row count must match A");
  if (Q.rows() != A.rows() || Q.cols() != A.cols())
    throw DimensionError("DARE: Q must match A");
  if (R.rows() != B.cols() || R.cols() != B.cols())
    throw DimensionError("DARE: R must match the input dimension");

  const auto rhs = [&](const Mat& P) -> Mat {
    const Mat BtPA = B.transpose() * P * A;
    const Mat S = R + B.transpose() * P * B;
    Eigen::LDLT<Mat> ldlt(S);
    if (ldlt.info() != Eigen::Success)
      throw ConvergenceError("DARE: R + B'PB became indefinite");
    return A.transpose() * P * A - BtPA.transpose() * ldlt.solve(BtPA) + Q;
  };

  Mat P = Q;
  long it = 0;
  for (; it < opts.max_iter; ++it) {
    Mat next = rhs(P);
    next = 0.5 * (next + next.transpose());  // keep exact symmetry
    const double step = spectral_norm(next - P);
    P = next;
    if (!P.allFinite() || P.cwiseAbs().maxCoeff() > opts.divergence_norm)
      throw ConvergenceError("DARE iteration diverged (norm > 1e12); (A,B) likely not stabilizable");
    if (step <= 0.05 * opts.tol) break;
  }
  if (it == opts.max_iter)
    throw ConvergenceError("DARE iteration exceeded max_iter without converging");

  const double residual = spectral_norm(rhs(P) - P);
  if (residual > opts.tol)
    throw ConvergenceError("DARE converged but residual exceeds tolerance");
  if (lambda_min(P) <= 0.0)
    throw ConvergenceError("DARE produced a non positive definite P");
  return ValueMatrix{P, residual};
}

Mat lqr_gain(const Mat& A, const Mat& B, const ValueMatrix& P, const Mat& R) {
  const Mat S = R + B.transpose() * P.P * B;
  Eigen::FullPivLU<Mat> lu(S);
  if (!lu.isInvertible())
    throw RegularityError("lqr_gain: R + B'PB is singular");
  return -lu.solve(B.transpose() * P.P * A);
}

}  // namespace rtnmpc
