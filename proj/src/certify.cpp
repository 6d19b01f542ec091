#include "rtnmpc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtnmpc/errors.hpp"
#include "rtnmpc/rng.hpp"
#include "fmtio.hpp"

namespace rtnmpc {

std::vector<double> log_spaced_grid(double lo, double hi, long n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 1)
    throw DomainError("log_spaced_grid requires 0 < lo < hi and n >= 1");
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = hi;
    return grid;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (long i = 0; i < n; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
  grid.back() = hi;  // exact endpoint
  return grid;
}

std::vector<std::array<double, 2>> lyapunov_decrease_curve(const ContinuousLTI& model,
                                                           const ValueMatrix& P, const Mat& K,
                                                           const std::vector<double>& T_grid) {
  std::vector<std::array<double, 2>> curve;
  curve.reserve(T_grid.size());
  for (const double T : T_grid) {
    const DiscreteLTI d = discretize_exact(model, T);
    const Mat Acl = d.A_T + d.B_T * K;
    const Mat dP = (Acl.transpose() * P.P * Acl - P.P) / T;
    curve.push_back({T, -lambda_max(0.5 * (dP + dP.transpose()))});
  }
  return curve;
}

LyapunovEstimate estimate_lyapunov_constants(const ContinuousLTI& model,
                                             const ValueMatrix& P, const Mat& K,
                                             const std::vector<double>& T_grid) {
  if (T_grid.empty()) throw DomainError("estimate_lyapunov_constants: empty grid");
  LyapunovEstimate est;
  const Vec evP = sym_eigenvalues(P.P);
  est.a1 = evP(0);
  est.a2 = evP(evP.size() - 1);
  est.a3 = std::numeric_limits<double>::infinity();
  est.curve = lyapunov_decrease_curve(model, P, K, T_grid);
  for (const auto& [T, neg] : est.curve) {
    if (neg <= 0.0)
      throw CertificationError(
          "Lyapunov decrease violated: -lambda_max(DeltaP(T)) = " + detail::fmt17(neg) +
          " <= 0 at T = " + detail::fmt17(T));
    est.a3 = std::min(est.a3, neg);
  }
  return est;
}

double estimate_second_order_growth_lq(const LqNlp& lq) {
  return 2.0 * lambda_max(lq.H);
}

double estimate_second_order_growth_sampled(const LqNlp& lq, double a_bar,
                                            const std::vector<double>& T_grid,
                                            double V_max, double e_radius,
                                            long sample_count, std::uint64_t seed) {
  if (T_grid.empty() || sample_count < 1)
    throw DomainError("estimate_second_order_growth_sampled: empty grid or samples");
  Rng rng(seed);
  const Mat Phi = sym_inverse_sqrt(lq.P.P);  // maps the unit ball onto {V <= 1}
  double mu = 0.0;
  for (const double T : T_grid) {
    const DiscreteLTI d = discretize_exact(lq.model, T);
    for (long i = 0; i < sample_count; ++i) {
      const Vec x = Phi * rng.ball(lq.n_x, std::sqrt(V_max));
      const Vec e = rng.ball(lq.n_u, e_radius);
      const double e2 = e.squaredNorm();
      if (e2 < 1e-20) continue;
      const Vec u = lq.condensed_input(x) + e;
      const Vec xp = d.A_T * x + d.B_T * u;
      const double excess = xp.dot(lq.P.P * xp) - (1.0 - T * a_bar) * x.dot(lq.P.P * x);
      if (!std::isfinite(excess))
        throw ConvergenceError("mu estimation: sampled value blew up");
      if (excess > 0.0) mu = std::max(mu, excess / (T * e2));
    }
  }
  return 1.1 * mu;
}

double estimate_sensitivity_lq(const LqNlp& lq) {
  Eigen::FullPivLU<Mat> lu(lq.H);
  if (!lu.isInvertible()) throw RegularityError("estimate_sensitivity: singular H");
  return spectral_norm(lu.solve(lq.G));
}

double estimate_sensitivity_sampled(const NlpProblem& problem, double x_radius,
                                    long sample_count, std::uint64_t seed) {
  if (sample_count < 1 || !(x_radius > 0.0))
    throw DomainError("estimate_sensitivity_sampled: empty sampling region");
  Rng rng(seed);
  double worst = 0.0;
  for (long i = 0; i < sample_count; ++i) {
    const Vec xa = rng.ball(problem.n_x, x_radius);
    const Vec xb = rng.ball(problem.n_x, x_radius);
    const double dx = (xb - xa).norm();
    if (dx < 1e-12) continue;
    const Solution sa = solve_exact(problem, xa, KktPoint::zero(problem.n, problem.n_g));
    const Solution sb = solve_exact(problem, xb, KktPoint::zero(problem.n, problem.n_g));
    worst = std::max(worst, (sb.z_bar.z() - sa.z_bar.z()).norm() / dx);
  }
  return 1.1 * worst;
}

StateBounds estimate_state_bounds(const ContinuousLTI& model,
                                  const std::vector<double>& T_grid) {
  if (T_grid.empty()) throw DomainError("estimate_state_bounds: empty grid");
  StateBounds b{0.0, 0.0};
  const Mat I = Mat::Identity(model.state_dim(), model.state_dim());
  for (const double T : T_grid) {
    const DiscreteLTI d = discretize_exact(model, T);
    b.L_psi_x = std::max(b.L_psi_x, spectral_norm(d.A_T - I) / T);
    b.L_psi_u = std::max(b.L_psi_u, spectral_norm(d.B_T) / T);
  }
  return b;
}

void CertifiedConstants::recompute_derived() {
  a_bar = a3 / a2;
  eta = L_psi_u + L_psi_x * sigma;
  theta = L_psi_u;
  gamma = sigma * kappa_hat * eta;
  gamma_hat = gamma / std::sqrt(a1);
  r_V_bar = std::sqrt(V_bar / a1);
  r_q_tilde = std::min(r_q, std::sqrt(a_bar * V_bar_q / mu));
}

bool CertifiedConstants::derived_consistent() const {
  CertifiedConstants c = *this;
  c.recompute_derived();
  return c.a_bar == a_bar && c.eta == eta && c.theta == theta && c.gamma == gamma &&
         c.gamma_hat == gamma_hat && c.r_V_bar == r_V_bar && c.r_q_tilde == r_q_tilde;
}

CertifiedConstants derive_chain(const Primaries& p, const RegionConfig& region) {
  if (!(p.a1 > 0.0) || p.a1 > p.a2)
    throw CertificationError("Lyapunov bounds violated: need 0 < a1 <= a2");
  if (!(p.a3 > 0.0))
    throw CertificationError("Lyapunov decrease violated: a3 <= 0");
  if (!(p.kappa_hat < 1.0))
    throw CertificationError("optimizer contraction violated: kappa_hat = " +
                             detail::fmt17(p.kappa_hat) + " >= 1");
  if (!(region.r_z > 0.0) || !(region.r_x > 0.0) || !(region.r_q > 0.0) ||
      !(region.V_bar > 0.0) || !(region.V_bar_q > 0.0) || !(region.T0 > 0.0))
    throw CertificationError("region radii and levels must be positive");

  CertifiedConstants c;
  c.a1 = p.a1;
  c.a2 = p.a2;
  c.a3 = p.a3;
  c.mu = p.mu;
  c.sigma = p.sigma;
  c.kappa_hat = p.kappa_hat;
  c.L_psi_x = p.L_psi_x;
  c.L_psi_u = p.L_psi_u;
  c.r_z = region.r_z;
  c.r_x = region.r_x;
  c.r_q = region.r_q;
  c.V_bar = region.V_bar;
  c.V_bar_q = region.V_bar_q;
  c.T0 = region.T0;
  c.recompute_derived();
  return c;
}

void sampling_bounds(CertifiedConstants& c) {
  if (!(c.kappa_hat < 1.0))
    throw CertificationError("sampling_bounds: kappa_hat >= 1");

  const double denom1 = c.eta * c.r_V_bar + c.theta * c.r_z;
  const double t1a = c.r_x / denom1;
  const double t1b = c.sigma * c.kappa_hat > 0.0
                         ? c.r_z * (1.0 - c.kappa_hat) /
                               (c.sigma * c.kappa_hat * (c.theta * c.r_z + c.eta * c.r_V_bar))
                         : std::numeric_limits<double>::infinity();
  c.T1 = std::min(std::min(t1a, t1b), c.T0);

  // T2' satisfies T = (1 - kappa(T)) r_q_tilde sqrt(a1) / (sqrt(V_bar) gamma)
  // with kappa(T) = kappa_hat (1 + T sigma theta); g is increasing in T, so
  // bisection on g(T) = T sqrt(V_bar) gamma - (1 - kappa(T)) r_q_tilde sqrt(a1).
  double t2p;
  if (c.gamma <= 0.0) {
    t2p = std::numeric_limits<double>::infinity();
  } else {
    const double scale =
        c.r_q_tilde * std::sqrt(c.a1) * (1.0 - c.kappa_hat) / (std::sqrt(c.V_bar) * c.gamma);
    const auto g = [&](double T) {
      return T * std::sqrt(c.V_bar) * c.gamma -
             (1.0 - c.kappa_of(T)) * c.r_q_tilde * std::sqrt(c.a1);
    };
    double lo = 0.0, hi = scale;  // g(0) < 0 <= g(scale)
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) <= 0.0)
        lo = mid;
      else
        hi = mid;
    }
    t2p = lo;
  }
  c.T2 = std::min(t2p, c.T1);
}

AuxMatrix aux_matrix(const CertifiedConstants& c, double T) {
  if (!(T > 0.0)) throw DomainError("aux_matrix requires T > 0");
  if (T * c.a_bar >= 1.0)
    throw DomainError("aux_matrix requires T a_bar < 1 (got T = " + detail::fmt17(T) + ")");
  return AuxMatrix{T, std::sqrt(1.0 - T * c.a_bar), std::sqrt(T * c.mu),
                   T * c.gamma_hat, c.kappa_of(T)};
}

std::pair<std::complex<double>, std::complex<double>> aux_eigenvalues(const AuxMatrix& A) {
  return eig_2x2(A.a11, A.a12, A.a21, A.a22);
}

double aux_spectral_radius(const CertifiedConstants& c, double T) {
  return std::abs(aux_eigenvalues(aux_matrix(c, T)).first);
}

MaxStableResult max_stable_T(const CertifiedConstants& c, double T_hint) {
  if (!(c.kappa_hat < 1.0))
    throw CertificationError("no stable sampling time exists: kappa_hat >= 1");
  if (!(T_hint > 0.0)) throw DomainError("max_stable_T requires T_hint > 0");
  double hi = T_hint;
  if (c.a_bar > 0.0) hi = std::min(hi, (1.0 - 1e-12) / c.a_bar);
  if (aux_spectral_radius(c, hi) < 1.0) return {hi, false};
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (aux_spectral_radius(c, mid) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, true};
}

std::vector<std::array<double, 3>> eigenvalue_sweep(const CertifiedConstants& c,
                                                    const std::vector<double>& T_grid) {
  std::vector<std::array<double, 3>> out;
  out.reserve(T_grid.size());
  for (const double T : T_grid) {
    const auto [l1, l2] = aux_eigenvalues(aux_matrix(c, T));
    out.push_back({T, std::abs(l1), std::abs(l2)});
  }
  return out;
}

void write_certificate(const std::string& path, const CertifiedConstants& c) {
  std::ostringstream out;
  const auto kv = [&out](const char* key, double v) {
    out << key << " = " << detail::fmt17(v) << '\n';
  };
  kv("a1", c.a1);
  kv("a2", c.a2);
  kv("a3", c.a3);
  kv("a_bar", c.a_bar);
  kv("mu", c.mu);
  kv("sigma", c.sigma);
  kv("kappa_hat", c.kappa_hat);
  kv("L_psi_x", c.L_psi_x);
  kv("L_psi_u", c.L_psi_u);
  kv("eta", c.eta);
  kv("theta", c.theta);
  kv("gamma", c.gamma);
  kv("gamma_hat", c.gamma_hat);
  kv("r_z", c.r_z);
  kv("r_x", c.r_x);
  kv("r_q", c.r_q);
  kv("r_q_tilde", c.r_q_tilde);
  kv("V_bar", c.V_bar);
  kv("V_bar_q", c.V_bar_q);
  kv("r_V_bar", c.r_V_bar);
  kv("T0", c.T0);
  kv("T1", c.T1);
  kv("T2", c.T2);
  kv("T_star", c.T_star);
  out << "T_star_crossing_found = " << (c.T_star_crossing_found ? "true" : "false") << '\n';
  out << "seed = " << c.seed << '\n';
  kv("grid_T_min", c.grid_T_min);
  kv("grid_T_max", c.grid_T_max);
  out << "grid_points = " << c.grid_points << '\n';
  detail::atomic_write(path, out.str());
}

void write_lyapunov_csv(const std::string& path,
                        const std::vector<std::array<double, 2>>& curve) {
  std::ostringstream out;
  out << "T,neg_lambda_max_dP\n";
  for (const auto& row : curve)
    out << detail::fmt17(row[0]) << ',' << detail::fmt17(row[1]) << '\n';
  detail::atomic_write(path, out.str());
}

void write_eigenvalue_csv(const std::string& path,
                          const std::vector<std::array<double, 3>>& curve) {
  std::ostringstream out;
  out << "T,abs_lambda1,abs_lambda2\n";
  for (const auto& row : curve)
    out << detail::fmt17(row[0]) << ',' << detail::fmt17(row[1]) << ','
        << detail::fmt17(row[2]) << '\n';
  detail::atomic_write(path, out.str());
}

}  // namespace rtnmpc
