#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

namespace rtnmpc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Spectral norm (largest singular value).
double spectral_norm(const Mat& m);

/// Eigenvalues of a symmetric matrix, ascending.
Vec sym_eigenvalues(const Mat& s);

double lambda_min(const Mat& s);
double lambda_max(const Mat& s);

/// Spectral radius of a general square matrix.
double spectral_radius(const Mat& m);

bool is_symmetric(const Mat& m, double tol);

/// S^{-1/2} for symmetric positive definite S.
Mat sym_inverse_sqrt(const Mat& s);

/// Eigenvalues of a real 2x2 matrix by the quadratic formula,
/// ordered by descending modulus.
std::pair<std::complex<double>, std::complex<double>> eig_2x2(double a11, double a12,
                                                              double a21, double a22);

}  // namespace rtnmpc
