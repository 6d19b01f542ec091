#include <doctest.h>

#include <cmath>

#include "rtnmpc/errors.hpp"
#include "rtnmpc/linmodel.hpp"
#include "rtnmpc/rng.hpp"
#include "test_fixtures.hpp"

using namespace rtnmpc;

TEST_SUITE_BEGIN("linmodel");

TEST_CASE("matrix_exponential: closed forms") {
  SUBCASE("exp(0) = I") {
    CHECK((matrix_exponential(Mat::Zero(2, 2)) - Mat::Identity(2, 2)).norm() == 0.0);
  }
  SUBCASE("nilpotent: series terminates at I + M") {
    Mat m(2, 2);
    m << 0, 1, 0, 0;
    Mat expected(2, 2);
    expected << 1, 1, 0, 1;
    CHECK((matrix_exponential(m) - expected).norm() <= 1e-15);
  }
  SUBCASE("scalar e^{-1}") {
    Mat m = -Mat::Ones(1, 1);
    CHECK(matrix_exponential(m)(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("non-square input rejected") {
    CHECK_THROWS_AS(matrix_exponential(Mat::Zero(2, 3)), DimensionError);
  }
}

TEST_CASE("matrix_exponential agrees with the series oracle on well-scaled inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 4);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(-0.5, 0.5);
    const Mat e = matrix_exponential(m);
    const Mat ref = fix::expm_series(m);
    CHECK((e - ref).norm() / ref.norm() <= 1e-12);
  }
}

TEST_CASE("matrix_exponential agrees with fixed-step ODE integration") {
  // random 4x4 with spectral norm <= 2
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    Mat m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    const double nrm = spectral_norm(m);
    if (nrm > 2.0) m *= 2.0 / nrm;
    CHECK((matrix_exponential(m) - fix::expm_ode(m)).norm() <= 1e-8);
  }
}

TEST_CASE("discretize_exact: closed forms") {
  SUBCASE("zero dynamics integrate to T B_c") {
    Mat B(2, 1);
    B << 0, 1;
    const ContinuousLTI m(Mat::Zero(2, 2), B, Mat::Identity(2, 2), Mat::Ones(1, 1));
    const DiscreteLTI d = discretize_exact(m, 0.5);
    CHECK((d.A_T - Mat::Identity(2, 2)).norm() == 0.0);
    CHECK(d.B_T(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d.B_T(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("double integrator at T = 0.1: B_T = [T^2/2; T]") {
    const DiscreteLTI d = discretize_exact(fix::di_model(), 0.1);
    CHECK(d.A_T(0, 1) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(d.B_T(0, 0) == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(d.B_T(1, 0) == doctest::Approx(0.1).epsilon(1e-14));
  }
  SUBCASE("scalar decay: 1 - e^{-1}") {
    Mat one = Mat::Ones(1, 1);
    const ContinuousLTI m(-one, one, one, one);
    const DiscreteLTI d = discretize_exact(m, 1.0);
    CHECK(d.A_T(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(d.B_T(0, 0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  }
  SUBCASE("T <= 0 rejected") {
    CHECK_THROWS_AS(discretize_exact(fix::di_model(), 0.0), DomainError);
    CHECK_THROWS_AS(discretize_exact(fix::di_model(), -0.1), DomainError);
  }
}

TEST_CASE("discretize_exact: A_T matches the series oracle to 1e-10") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Mat a(3, 3), b(3, 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
      for (int j = 0; j < 2; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
    }
    const ContinuousLTI m(a, b, Mat::Identity(3, 3), Mat::Identity(2, 2));
    const double T = rng.uniform(0.01, 0.5);
    CHECK((discretize_exact(m, T).A_T - fix::expm_series(a * T)).norm() <= 1e-10);
  }
}

TEST_CASE("discretize_exact: semigroup property on random stable models") {
  Rng rng(14);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);  // up to 6
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    a -= (spectral_norm(a) + 0.1) * Mat::Identity(n, n);  // stable shift
    const ContinuousLTI m(a, Mat::Ones(n, 1), Mat::Identity(n, n), Mat::Ones(1, 1));
    const double T1 = rng.uniform(0.05, 1.0), T2 = rng.uniform(0.05, 1.0);
    const Mat lhs = discretize_exact(m, T1 + T2).A_T;
    const Mat rhs = discretize_exact(m, T1).A_T * discretize_exact(m, T2).A_T;
    CHECK((lhs - rhs).norm() <= 1e-9);
  }
}

TEST_CASE("solve_dare: closed forms and fixture") {
  SUBCASE("A = 0 collapses to P = Q") {
    Mat q = Mat::Identity(3, 3);
    const ValueMatrix v = solve_dare(Mat::Zero(3, 3), Mat::Ones(3, 1), q, Mat::Ones(1, 1));
    CHECK((v.P - q).norm() <= 1e-12);
    CHECK(v.residual <= 1e-10);
  }
  SUBCASE("scalar golden ratio") {
    Mat one = Mat::Ones(1, 1);
    const ValueMatrix v = solve_dare(one, one, one, one);
    CHECK(v.P(0, 0) == doctest::Approx(fix::kGoldenRatio).epsilon(1e-10));
    CHECK(v.residual <= 1e-10);
  }
  SUBCASE("study model at T_d = 0.1 reproduces the frozen oracle values") {
    const ValueMatrix& v = fix::di_lq().P;
    CHECK(v.residual <= 1e-10);
    CHECK(v.P(0, 0) == doctest::Approx(fix::kP00).epsilon(1e-9));
    CHECK(v.P(0, 1) == doctest::Approx(fix::kP01).epsilon(1e-9));
    CHECK(v.P(1, 1) == doctest::Approx(fix::kP11).epsilon(1e-9));
    CHECK(is_symmetric(v.P, 1e-10));
    CHECK(lambda_min(v.P) > 0.0);
  }
  SUBCASE("divergence raises") {
    Mat a = 2.0 * Mat::Ones(1, 1);
    CHECK_THROWS_AS(solve_dare(a, Mat::Zero(1, 1), Mat::Ones(1, 1), Mat::Ones(1, 1)),
                    ConvergenceError);
  }
}

TEST_CASE("solve_dare: solution certifies closed-loop descent") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    Mat a(n, n), b(n, 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
      b(i, 0) = rng.uniform(-1.0, 1.0);
    }
    const Mat q = Mat::Identity(n, n), r = Mat::Identity(1, 1);
    ValueMatrix v;
    try {
      v = solve_dare(a, b, q, r);
    } catch (const ConvergenceError&) {
      continue;  // not stabilizable; nothing to certify
    }
    const Mat k = lqr_gain(a, b, v, r);
    const Mat acl = a + b * k;
    const double descent = lambda_max(acl.transpose() * v.P * acl - v.P);
    CHECK(descent < -1e-12 * lambda_min(q));
    CHECK(spectral_radius(acl) < 1.0);
  }
}

TEST_CASE("lqr_gain") {
  SUBCASE("scalar golden-ratio gain") {
    Mat one = Mat::Ones(1, 1);
    const ValueMatrix v{fix::kGoldenRatio * one, 0.0};
    const Mat k = lqr_gain(one, one, v, one);
    CHECK(k(0, 0) ==
          doctest::Approx(-fix::kGoldenRatio / (1.0 + fix::kGoldenRatio)).epsilon(1e-12));
    CHECK(k(0, 0) == doctest::Approx(-0.6180339887498949).epsilon(1e-10));
  }
  SUBCASE("no actuation gives zero gain") {
    const Mat k = lqr_gain(Mat::Identity(2, 2), Mat::Zero(2, 1),
                           ValueMatrix{Mat::Identity(2, 2), 0.0}, Mat::Ones(1, 1));
    CHECK(k.norm() == 0.0);
  }
  SUBCASE("study model closed loop is Schur stable") {
    const auto& lq = fix::di_lq();
    const Mat k = lqr_gain(lq.disc.A_T, lq.disc.B_T, lq.P, fix::kTd * Mat::Identity(1, 1));
    CHECK((k - lq.K).norm() <= 1e-12);
    CHECK(spectral_radius(lq.disc.A_T + lq.disc.B_T * k) < 1.0);
  }
  SUBCASE("singular R + B'PB rejected") {
    const Mat zero = Mat::Zero(1, 1);
    CHECK_THROWS_AS(lqr_gain(Mat::Ones(1, 1), zero, ValueMatrix{Mat::Ones(1, 1), 0.0}, zero),
                    RegularityError);
  }
}

TEST_CASE("ContinuousLTI construction checks") {
  Mat A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  SUBCASE("asymmetric Q rejected") {
    Mat q(2, 2);
    q << 1, 1e-3, 0, 1;
    CHECK_THROWS_AS(ContinuousLTI(A, B, q, Mat::Ones(1, 1)), DomainError);
  }
  SUBCASE("semidefinite R rejected") {
    CHECK_THROWS_AS(ContinuousLTI(A, B, Mat::Identity(2, 2), Mat::Zero(1, 1)), DomainError);
  }
  SUBCASE("inconsistent dimensions rejected") {
    CHECK_THROWS_AS(ContinuousLTI(A, Mat::Ones(3, 1), Mat::Identity(2, 2), Mat::Ones(1, 1)),
                    DimensionError);
  }
}

TEST_SUITE_END();
