#pragma once

#include "rtnmpc/linalg.hpp"

namespace rtnmpc {

/// Continuous-time LTI model with quadratic stage cost,
///   xdot = A_c x + B_c u,   l(x, u) = x'Q_c x + u'R_c u.
struct ContinuousLTI {
  Mat A_c;  ///< n_x x n_x
  Mat B_c;  ///< n_x x n_u
  Mat Q_c;  ///< n_x x n_x, symmetric PSD
  Mat R_c;  ///< n_u x n_u, symmetric PD

  ContinuousLTI(Mat A, Mat B, Mat Q, Mat R);

  Eigen::Index state_dim() const { return A_c.rows(); }
  Eigen::Index input_dim() const { return B_c.cols(); }
};

/// Zero-order-hold discretization of an LTI model over one sampling period.
struct DiscreteLTI {
  Mat A_T;
  Mat B_T;
  double T;
};

/// Riccati value matrix together with the norm of the equation defect.
struct ValueMatrix {
  Mat P;
  double residual;
};

/// exp(M) by scaling-and-squaring with the Taylor series truncated at a
/// machine-precision term.
Mat matrix_exponential(const Mat& m);

/// Exact discretization: A_T = exp(A_c T), B_T = (int_0^T exp(A_c s) ds) B_c,
/// both read off the augmented exponential exp([[A_c, B_c], [0, 0]] T).
DiscreteLTI discretize_exact(const ContinuousLTI& model, double T);

struct DareOptions {
  double tol = 1e-10;            ///< bound on the spectral norm of the defect
  long max_iter = 100000;
  double divergence_norm = 1e12;
};

/// Discrete-time algebraic Riccati equation
///   P = A'PA - (A'PB)(R + B'PB)^{-1}(B'PA) + Q
/// solved by fixed-point (value) iteration from P0 = Q.
ValueMatrix solve_dare(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
                       const DareOptions& opts = {});

/// K = -(R + B'PB)^{-1} B'PA.
Mat lqr_gain(const Mat& A, const Mat& B, const ValueMatrix& P, const Mat& R);

}  // namespace rtnmpc
