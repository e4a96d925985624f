#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsine/basis.hpp"
#include "qsine/schauder.hpp"

using namespace qsine;
using std::numbers::pi;

TEST_SUITE("basis") {
  TEST_CASE("pi_q") {
    CHECK(std::abs(pi_q(2.0) - pi) <= 1e-15);
    CHECK(std::abs(pi_q(1e6) - 2.0) <= 1e-5);
    CHECK(std::abs(pi_q(4.0) - 2.0 * pi / (4.0 * std::sin(pi / 4.0))) <= 1e-15);
    CHECK(std::abs(pi_q(4.0) - 2.221441469) <= 1e-9);
    CHECK_THROWS_AS(pi_q(1.0), InvalidInput);
    CHECK_THROWS_AS(QParam(0.5), InvalidInput);
  }

  TEST_CASE("f1 table at q = 2 is arcsin") {
    const NonUniformTable t = f1_inverse_table(2.0, 20000);
    CHECK(t.xs.back() == 0.5);
    CHECK(t.ys.back() == 1.0);
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < t.xs.size(); ++i) err = std::max(err, std::abs(t.xs[i] - std::asin(t.ys[i]) / pi));
    CHECK(err <= 1e-8);
  }

  TEST_CASE("f1 inverse at q = 4 against the binomial series") {
    // int_0^y (1 - t^q)^(-1/q) dt = sum_k (1/q)_k / k! * y^(qk+1) / (qk+1)
    const double q = 4.0, y = 0.5;
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 60; ++k) {
      sum += term * std::pow(y, q * k + 1.0) / (q * k + 1.0);
      term *= (1.0 / q + k) / (k + 1.0);
    }
    const double expected = sum / pi_q(q);
    CHECK(std::abs(expected - 0.2257982307673239) <= 1e-15);
    const NonUniformTable t = f1_inverse_table(q);
    const double x = bisect([&](double s) { return y - hermite_eval(t, s); }, 0.0, 0.5, 1e-15);
    CHECK(std::abs(x - expected) <= 1e-9);
  }

  TEST_CASE("f1 at q = 2 is sin(pi x)") {
    const auto [f, df] = build_f1(2.0, kDefaultQuadraturePoints, 4000);
    double e0 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) e0 = std::max(e0, std::abs(f[j] - std::sin(pi * f.x(j))));
    CHECK(e0 <= 1e-8);
    CHECK_THROWS_AS(build_f1(2.0, kDefaultQuadraturePoints, 401), InvalidInput);
  }

  TEST_CASE("sampled basis at q = 2 and its identities") {
    const QSineBasis b = sample_basis(2.0, 5, 1000);
    double err = 0.0;
    for (std::size_t n = 1; n <= 5; ++n) {
      for (std::size_t j = 0; j <= 1000; ++j) {
        const double x = b.f[n - 1].x(j), nn = static_cast<double>(n);
        err = std::max(err, std::abs(b.f[n - 1][j] - std::sin(nn * pi * x)));
        err = std::max(err, std::abs(b.df[n - 1][j] - nn * pi * std::cos(nn * pi * x)));
      }
    }
    CHECK(err <= 1e-7);
    for (double q : {1.3, 4.0, 12.0}) {
      const QSineBasis bq = sample_basis(q, 4, 800);
      for (std::size_t n = 1; n <= 4; ++n) CHECK(pythagorean_residual(bq, n) <= 1e-6);
      // f_1 is symmetric about 1/2 with maximum 1 there.
      CHECK(bq.f[0][400] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(bq.f[0][100] - bq.f[0][700]) <= 1e-12);
    }
    CHECK_THROWS_AS(sample_basis(2.0, 50, 100), InvalidInput);
  }
}

TEST_SUITE("schauder") {
  TEST_CASE("tau at q = 2 and in the q -> infinity limit") {
    const auto [f, df] = build_f1(2.0, kDefaultQuadraturePoints, 2000);
    const TauVector tau = compute_tau(f, 20, 2.0);
    CHECK(std::abs(tau(1) - 1.0 / std::sqrt(2.0)) <= 1e-10);
    for (std::size_t j = 2; j <= 20; ++j) CHECK(std::abs(tau(j)) <= 1e-10);
    CHECK_THROWS_AS(compute_tau(f, 400, 2.0), InvalidInput);

    CHECK(tau_infinity(2) == 0.0);
    CHECK(std::abs(tau_infinity(1) - 4.0 * std::sqrt(2.0) / (pi * pi)) <= 1e-15);
    CHECK(std::abs(tau_infinity(3) + 4.0 * std::sqrt(2.0) / (9.0 * pi * pi)) <= 1e-15);
    const auto [fb, dfb] = build_f1(1e6, kDefaultQuadraturePoints, 4000);
    const TauVector big = compute_tau(fb, 9, 1e6);
    for (std::size_t j = 1; j <= 9; ++j) CHECK(std::abs(big(j) - tau_infinity(j)) <= 1e-4);
  }

  TEST_CASE("Schauder matrix structure") {
    const auto [f2, df2] = build_f1(2.0, kDefaultQuadraturePoints, 400);
    const SchauderMatrix S2 = assemble_T(compute_tau(f2, 20, 2.0), 20);
    CHECK((S2.T - Eigen::MatrixXd::Identity(20, 20) / std::sqrt(2.0)).cwiseAbs().maxCoeff() <= 1e-10);

    const auto [f, df] = build_f1(3.0, kDefaultQuadraturePoints, 1000);
    const TauVector tau = compute_tau(f, 30, 3.0);
    const SchauderMatrix S = assemble_T(tau, 30);
    for (Eigen::Index r = 0; r < 30; ++r) {
      for (Eigen::Index c = r + 1; c < 30; ++c) CHECK(S.T(r, c) == 0.0);
    }
    // Row 7 (prime): tau(7) in column 1, tau(1) on the diagonal, nothing else.
    for (Eigen::Index c = 0; c < 30; ++c) {
      const double expected = c == 0 ? tau(7) : (c == 6 ? tau(1) : 0.0);
      CHECK(S.T(6, c) == expected);
    }
    CHECK(std::abs(S.T_inv(6, 6) - 1.0 / tau(1)) <= 1e-14);
    CHECK(std::abs(S.T_inv(6, 0) + tau(7) / (tau(1) * tau(1))) <= 1e-14);
    CHECK((S.T * S.T_inv - Eigen::MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_THROWS_AS(assemble_T(tau, 31), InvalidInput);
  }

  TEST_CASE("dual basis is biorthogonal") {
    const SpectralSpace s2 = build_space(2.0, 6, 600);
    CHECK((s2.dual.coeffs - std::sqrt(2.0) * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-9);
    for (double q : {1.4, 2.0, 6.0}) {
      const SpectralSpace s = build_space(q, 6, 2400);
      CHECK(biorthogonality_error(s) <= 1e-6);
    }
  }

  TEST_CASE("tau bound and regularity estimator") {
    for (double q : {1.2, 2.5, 10.0}) {
      const auto [f, df] = build_f1(q, kDefaultQuadraturePoints, 2000);
      const TauVector tau = compute_tau(f, 200, q);
      for (std::size_t j = 1; j <= 200; ++j) CHECK(std::abs(tau(j)) <= tau_bound(q, j));
    }
    TauVector power{2.0, {}};
    for (std::size_t j = 1; j <= 400; ++j) power.tau.push_back(std::pow(static_cast<double>(j), -2.0));
    CHECK(std::abs(estimate_regularity(power, 11, 399) - 1.5) <= 1e-12);
    CHECK_THROWS_AS(estimate_regularity(power, 10, 500), InvalidInput);
  }
}
