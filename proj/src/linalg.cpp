#include "rtnmpc/linalg.hpp"

#include <cmath>

#include "rtnmpc/errors.hpp"

namespace rtnmpc {

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Vec sym_eigenvalues(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success)
    throw Error("symmetric eigenvalue decomposition failed");
  return es.eigenvalues();
}

double lambda_min(const Mat& s) { return sym_eigenvalues(s)(0); }

double lambda_max(const Mat& s) {
  const Vec ev = sym_eigenvalues(s);
  return ev(ev.size() - 1);
}

double spectral_radius(const Mat& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_symmetric(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Mat sym_inverse_sqrt(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0)
    throw DomainError("sym_inverse_sqrt requires a positive definite matrix");
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

std::pair<std::complex<double>, std::complex<double>> eig_2x2(double a11, double a12,
                                                              double a21, double a22) {
  const double tr = a11 + a22;
  const double det = a11 * a22 - a12 * a21;
  const double disc = tr * tr - 4.0 * det;
  std::complex<double> l1, l2;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    l1 = {0.5 * (tr + root), 0.0};
    l2 = {0.5 * (tr - root), 0.0};
  } else {
    const double imag = 0.5 * std::sqrt(-disc);
    l1 = {0.5 * tr, imag};
    l2 = {0.5 * tr, -imag};
  }
  if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
  return {l1, l2};
}

}  // namespace rtnmpc
