#include <doctest.h>

#include <cmath>

#include "rtnmpc/certify.hpp"
#include "rtnmpc/errors.hpp"
#include "rtnmpc/rtopt.hpp"
#include "rtnmpc/rng.hpp"
#include "test_fixtures.hpp"

using namespace rtnmpc;

namespace {

double di_rho() { return 1.5 * lambda_max(fix::di_lq().H); }

/// Iterate of the study optimizer at (x, u0), with the full point rebuilt.
KktPoint point_at(const LqNlp& lq, const Vec& x, const Vec& u0) {
  return lq.complete_point(x, u0);
}

}  // namespace

TEST_SUITE_BEGIN("rtopt");

TEST_CASE("step: fixed points and hand arithmetic") {
  const auto& lq = fix::di_lq();
  SUBCASE("the exact solution is a fixed point") {
    const RealTimeOptimizer opt(lq, OptVariant::fixed_hessian_gradient, di_rho());
    Rng rng(41);
    for (int i = 0; i < 10; ++i) {
      const Vec x = rng.ball(2, 1.5);
      const Vec ubar = lq.condensed_input(x);
      const KktPoint z = point_at(lq, x, ubar);
      const KktPoint z_next = opt.step(z, x);
      CHECK((lq.problem.input_of(z_next) - ubar).norm() <= 1e-12);
    }
  }
  SUBCASE("rho = H makes one step exact") {
    const auto& sc = fix::scalar_lq();
    const RealTimeOptimizer opt(sc, OptVariant::fixed_hessian_gradient, sc.H(0, 0));
    Rng rng(42);
    for (int i = 0; i < 5; ++i) {
      const Vec x = rng.ball(1, 2.0);
      const Vec u0 = rng.ball(1, 2.0);
      const KktPoint z_next = opt.step(point_at(sc, x, u0), x);
      CHECK((sc.problem.input_of(z_next) + sc.G * x / sc.H(0, 0)).norm() <= 1e-13);
    }
  }
  SUBCASE("hand arithmetic: h = 2, rho = 4, u0 = 1, G = 1, x+ = 1 gives 0.25") {
    LqNlp forged = fix::scalar_lq();
    forged.H = 2.0 * Mat::Ones(1, 1);
    forged.G = Mat::Ones(1, 1);
    forged.K = -forged.G / 2.0;
    const RealTimeOptimizer opt(forged, OptVariant::fixed_hessian_gradient, 4.0);
    const KktPoint z_next = opt.step(point_at(forged, Vec::Ones(1), Vec::Ones(1)), Vec::Ones(1));
    CHECK(forged.problem.input_of(z_next)(0) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("exact_newton lands on the solution from anywhere") {
    const RealTimeOptimizer opt(lq, OptVariant::exact_newton);
    Rng rng(43);
    const Vec x = rng.ball(2, 1.0);
    const KktPoint z0 = KktPoint::from_z(rng.ball(9, 3.0), 5, 4);
    const KktPoint z1 = opt.step(z0, x);
    CHECK(kkt_residual(lq.problem, z1, x).norm() <= 1e-10);
  }
}

TEST_CASE("contraction_factor") {
  const auto& lq = fix::di_lq();
  SUBCASE("rho = H gives zero (scalar)") {
    const auto& sc = fix::scalar_lq();
    const RealTimeOptimizer opt(sc, OptVariant::fixed_hessian_gradient, sc.H(0, 0));
    const ContractionEstimate est = opt.contraction_factor();
    CHECK(est.value == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(est.empirical);
  }
  SUBCASE("scalar closed form |1 - h/rho|") {
    const auto& sc = fix::scalar_lq();
    const double h = sc.H(0, 0);
    for (const double rho : {0.7 * h, 1.5 * h, 4.0 * h}) {
      const RealTimeOptimizer opt(sc, OptVariant::fixed_hessian_gradient, rho);
      CHECK(opt.contraction_factor().value ==
            doctest::Approx(std::abs(1.0 - h / rho)).epsilon(1e-13));
    }
  }
  SUBCASE("study model: rho = 1.5 lambda_max(H) gives 1/3") {
    const RealTimeOptimizer opt(lq, OptVariant::fixed_hessian_gradient, di_rho());
    CHECK(opt.contraction_factor().value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  }
  SUBCASE("exact_newton is empirically a one-step solve") {
    const RealTimeOptimizer opt(lq, OptVariant::exact_newton);
    CHECK(opt.contraction_factor().value == 0.0);
    const ContractionEstimate est = opt.contraction_factor_sampled({1.0, 1.0}, 200, 44);
    CHECK(est.empirical);
    CHECK(est.value <= 1e-8);
  }
  SUBCASE("empty sampling region rejected") {
    const RealTimeOptimizer opt(lq, OptVariant::exact_newton);
    CHECK_THROWS_AS(opt.contraction_factor_sampled({0.0, 1.0}, 200, 0), ConfigError);
    CHECK_THROWS_AS(opt.contraction_factor_sampled({1.0, 1.0}, 0, 0), ConfigError);
  }
}

TEST_CASE("contraction inequality holds on 500 random pairs") {
  const auto& lq = fix::di_lq();
  const RealTimeOptimizer opt(lq, OptVariant::fixed_hessian_gradient, di_rho());
  const double kappa_hat = opt.contraction_factor().value;
  Rng rng(45);
  for (int i = 0; i < 500; ++i) {
    const Vec x = fix::sample_sublevel(rng, lq.P.P, 2.5);
    const Vec ubar = lq.condensed_input(x);
    const Vec u0 = ubar + rng.ball(1, 1.0);
    const KktPoint z_next = opt.step(point_at(lq, x, u0), x);
    const double e_before = (u0 - ubar).norm();
    const double e_after = (lq.problem.input_of(z_next) - ubar).norm();
    CHECK(e_after <= (kappa_hat + 1e-9) * e_before);
  }
}

TEST_CASE("tracking contraction over 500 random parameter moves") {
  // ||z+ - z_bar(x+)|| <= kappa_hat ||z - z_bar(x)|| + sigma kappa_hat ||x+ - x||
  const auto& lq = fix::di_lq();
  const RealTimeOptimizer opt(lq, OptVariant::fixed_hessian_gradient, di_rho());
  const double kappa_hat = opt.contraction_factor().value;
  const double sigma = estimate_sensitivity_lq(lq);
  Rng rng(46);
  for (int i = 0; i < 500; ++i) {
    const Vec x = fix::sample_sublevel(rng, lq.P.P, 2.5);
    const Vec x_next = x + rng.ball(2, 1.0);
    const Vec u0 = lq.condensed_input(x) + rng.ball(1, 1.0);
    const KktPoint z_next = opt.step(point_at(lq, x, u0), x_next);
    const double e = (u0 - lq.condensed_input(x)).norm();
    const double e_next = (lq.problem.input_of(z_next) - lq.condensed_input(x_next)).norm();
    CHECK(e_next <= kappa_hat * e + sigma * kappa_hat * (x_next - x).norm() + 1e-9);
  }
}

TEST_CASE("iterating at fixed parameter converges Q-linearly") {
  const auto& lq = fix::di_lq();
  const RealTimeOptimizer opt(lq, OptVariant::fixed_hessian_gradient, di_rho());
  const double kappa_hat = opt.contraction_factor().value;
  Vec x(2);
  x << 0.7, -0.3;
  const Vec ubar = lq.condensed_input(x);
  KktPoint z = point_at(lq, x, 2.0 * Vec::Ones(1));
  double prev = (lq.problem.input_of(z) - ubar).norm();
  for (int k = 0; k < 25 && prev > 1e-9; ++k) {
    z = opt.step(z, x);
    const double cur = (lq.problem.input_of(z) - ubar).norm();
    CHECK(cur <= (kappa_hat + 1e-9) * prev + 1e-15);
    prev = cur;
  }
  CHECK(prev <= 1e-3);  // contraction actually progressed
}

TEST_CASE("construction checks") {
  const auto& lq = fix::di_lq();
  CHECK_THROWS_AS(RealTimeOptimizer(lq, OptVariant::fixed_hessian_gradient, 0.0), ConfigError);
  CHECK_THROWS_AS(RealTimeOptimizer(lq.problem, OptVariant::fixed_hessian_gradient),
                  ConfigError);
}

TEST_SUITE_END();
