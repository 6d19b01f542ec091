#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rtnmpc/coupled.hpp"
#include "rtnmpc/nlp.hpp"

namespace rtnmpc {

/// Region configuration for the certificate. The theory only asserts that
/// suitable radii exist; these are inputs, validated a posteriori by the
/// invariance tests.
struct RegionConfig {
  double r_z = 1.0;
  double r_x = 1.0;
  double r_q = 1.0;
  double V_bar = 0.0;    ///< level of the working sublevel set
  double V_bar_q = 0.0;  ///< level of the invariant sublevel set (<= V_bar)
  double T0 = 0.0;       ///< horizon of the nominal Lyapunov decrease
};

/// Every constant of the stability chain. Primaries are estimated; derived
/// fields follow from them by fixed formulas (see derive_chain).
struct CertifiedConstants {
  // primaries
  double a1 = 0, a2 = 0, a3 = 0;       ///< Lyapunov bounds
  double mu = 0;                        ///< second-order growth
  double sigma = 0;                     ///< solution-map Lipschitz constant
  double kappa_hat = 0;                 ///< optimizer contraction
  double L_psi_x = 0, L_psi_u = 0;      ///< state-evolution bounds

  // derived
  double a_bar = 0;      ///< a3 / a2
  double eta = 0;        ///< L_psi_u + L_psi_x * sigma
  double theta = 0;      ///< L_psi_u
  double gamma = 0;      ///< sigma * kappa_hat * eta
  double gamma_hat = 0;  ///< gamma / sqrt(a1)
  double r_V_bar = 0;    ///< sqrt(V_bar / a1)
  double r_q_tilde = 0;  ///< min{r_q, sqrt(a_bar V_bar_q / mu)}

  // region
  double r_z = 0, r_x = 0, r_q = 0;
  double V_bar = 0, V_bar_q = 0;

  // sampling-time bounds
  double T0 = 0;
  double T1 = 0;
  double T2 = 0;
  double T_star = 0;
  bool T_star_crossing_found = false;  ///< false: stable up to the bracket end

  // metadata
  std::uint64_t seed = 0;
  double grid_T_min = 0, grid_T_max = 0;
  long grid_points = 0;

  /// kappa(T) = kappa_hat (1 + T sigma theta).
  double kappa_of(double T) const { return kappa_hat * (1.0 + T * sigma * theta); }

  /// Recompute every derived field from the stored primaries and region.
  void recompute_derived();

  /// True when the stored derived fields reproduce their defining formulas
  /// bit-identically.
  bool derived_consistent() const;
};

/// 2x2 matrix of the auxiliary dynamics at sampling time T:
///   [ (1 - T a_bar)^{1/2}   (T mu)^{1/2} ]
///   [ T gamma_hat           kappa(T)     ]
struct AuxMatrix {
  double T;
  double a11, a12, a21, a22;
};

std::vector<double> log_spaced_grid(double lo, double hi, long n);

struct LyapunovEstimate {
  double a1, a2, a3;
  /// (T, -lambda_max(DeltaP(T))) per grid point; the curve behind a3.
  std::vector<std::array<double, 2>> curve;
};

/// (T, -lambda_max(DeltaP(T))) over a grid, with
/// DeltaP(T) = (1/T)((A_T + B_T K)'P(A_T + B_T K) - P); no positivity gate.
std::vector<std::array<double, 2>> lyapunov_decrease_curve(const ContinuousLTI& model,
                                                           const ValueMatrix& P, const Mat& K,
                                                           const std::vector<double>& T_grid);

/// a1 = lambda_min(P), a2 = lambda_max(P), and a3 from the decrease-rate
/// matrix DeltaP(T) = (1/T)((A_T + B_T K)'P(A_T + B_T K) - P):
/// a3 = min over the grid of -lambda_max(DeltaP(T)). DeltaP is negative
/// definite when the closed loop decreases, so the sign flip makes a3 the
/// positive rate in V(x+) - V(x) <= -T a3 ||x||^2. Fails with
/// CertificationError if any grid point has -lambda_max <= 0.
LyapunovEstimate estimate_lyapunov_constants(const ContinuousLTI& model,
                                             const ValueMatrix& P, const Mat& K,
                                             const std::vector<double>& T_grid);

/// LQ path of the growth constant: mu = 2 lambda_max(H).
double estimate_second_order_growth_lq(const LqNlp& lq);

/// Sampled path: smallest mu with
///   V(psi(T; x, u)) <= (1 - T a_bar) V(x) + T mu ||u - u_bar(x)||^2
/// over sampled (T, x, u), inflated by 1.1. States are drawn from
/// {V(x) <= V_max}, inputs from u_bar(x) + ball(e_radius). The bound is
/// estimated in the sublevel-scaled form above (the one the auxiliary
/// dynamics consume); the raw -T a3 ||x||^2 form admits no finite mu
/// whenever the decrease rate is tight in some direction.
double estimate_second_order_growth_sampled(const LqNlp& lq, double a_bar,
                                            const std::vector<double>& T_grid,
                                            double V_max, double e_radius,
                                            long sample_count, std::uint64_t seed);

/// LQ path of the solution sensitivity: sigma = ||H^{-1}G||.
double estimate_sensitivity_lq(const LqNlp& lq);

/// Sampled path: max difference quotient ||z_bar(x'') - z_bar(x')|| /
/// ||x'' - x'|| over random pairs, inflated by 1.1.
double estimate_sensitivity_sampled(const NlpProblem& problem, double x_radius,
                                    long sample_count, std::uint64_t seed);

struct StateBounds {
  double L_psi_x;  ///< max over the grid of (1/T)||A_T - I||
  double L_psi_u;  ///< max over the grid of (1/T)||B_T||
};

StateBounds estimate_state_bounds(const ContinuousLTI& model,
                                  const std::vector<double>& T_grid);

struct Primaries {
  double a1, a2, a3, mu, sigma, kappa_hat, L_psi_x, L_psi_u;
};

/// Populate every derived constant from the primaries; deterministic and
/// idempotent. Throws CertificationError when kappa_hat >= 1 or a1 <= 0.
CertifiedConstants derive_chain(const Primaries& p, const RegionConfig& region);

/// T1 = min{T1', T0} and T2 = min{T2', T1} per their defining formulas;
/// kappa(T) inside T2' is resolved by bisection on the self-consistent
/// equation T = (1 - kappa(T)) r_q_tilde sqrt(a1) / (sqrt(V_bar) gamma).
/// Fills consts.T1 and consts.T2.
void sampling_bounds(CertifiedConstants& consts);

/// Requires T > 0 and T a_bar < 1.
AuxMatrix aux_matrix(const CertifiedConstants& consts, double T);

/// Closed-form eigenvalues ordered by descending modulus.
std::pair<std::complex<double>, std::complex<double>> aux_eigenvalues(const AuxMatrix& A);

double aux_spectral_radius(const CertifiedConstants& consts, double T);

struct MaxStableResult {
  double T_star;
  bool crossing_found;  ///< false: spectral radius < 1 up to the bracket end
};

/// Largest T in (0, min(T_hint, 1/a_bar)) with spectral radius of the
/// auxiliary matrix below 1, located by bisection to 1e-10. Returns the
/// bracket end flagged crossing_found = false when no crossing exists.
MaxStableResult max_stable_T(const CertifiedConstants& consts, double T_hint);

/// Certificate file: key = value per line, 17 significant digits,
/// written atomically (write-then-rename).
void write_certificate(const std::string& path, const CertifiedConstants& c);

/// Sweep CSVs: T,neg_lambda_max_dP and T,abs_lambda1,abs_lambda2.
void write_lyapunov_csv(const std::string& path,
                        const std::vector<std::array<double, 2>>& curve);
void write_eigenvalue_csv(const std::string& path,
                          const std::vector<std::array<double, 3>>& curve);

/// Eigenvalue moduli (T, |lambda1|, |lambda2|) over a grid.
std::vector<std::array<double, 3>> eigenvalue_sweep(const CertifiedConstants& consts,
                                                    const std::vector<double>& T_grid);

}  // namespace rtnmpc
