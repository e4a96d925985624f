#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsine/approx.hpp"

using namespace qsine;
using std::numbers::pi;

TEST_SUITE("approx") {
  TEST_CASE("sine coefficients") {
    const std::size_t J = 2000;
    const Eigen::VectorXd e3 = sine_coeffs(sine_mode(3, J), 10);
    for (Eigen::Index k = 0; k < 10; ++k) CHECK(std::abs(e3[k] - (k == 2 ? 1.0 : 0.0)) <= 1e-12);
    const Eigen::VectorXd s = sine_coeffs(GridFunction::sample(J, [](double x) { return std::sin(pi * x); }), 10);
    CHECK(std::abs(s[0] - 1.0 / std::sqrt(2.0)) <= 1e-12);
    // The indicator of [1/4, 3/4] has its jumps on grid nodes; compare at the
    // quadrature accuracy of a discontinuous integrand.
    const Eigen::VectorXd b = sine_coeffs(benchmark_source("b", 4000), 20);
    for (Eigen::Index k = 0; k < 20; ++k) {
      const double j = static_cast<double>(k + 1);
      const double exact = std::sqrt(2.0) * (std::cos(j * pi / 4.0) - std::cos(3.0 * j * pi / 4.0)) / (j * pi);
      CHECK(std::abs(b[k] - exact) <= 1e-3);
    }
    CHECK_THROWS_AS(sine_coeffs(sine_mode(1, 100), 11), InvalidInput);
  }

  TEST_CASE("primal and dual expansions recover basis functions") {
    const SpectralSpace space = build_space(10.0, 12, 4800);
    const SampledFamily primal = primal_family(space), dual = dual_family(space);
    for (std::size_t m : {1u, 4u, 10u}) {
      const Expansion e = expand_primal(space.basis.f[m - 1], space.schauder, space.dual);
      for (Eigen::Index k = 0; k < 12; ++k) CHECK(std::abs(e.coeffs[k] - (k + 1 == static_cast<Eigen::Index>(m))) <= 1e-6);
      const Expansion d = expand_dual(space.dual.f[m - 1], space.basis, space.dual);
      for (Eigen::Index k = 0; k < 12; ++k) CHECK(std::abs(d.coeffs[k] - (k + 1 == static_cast<Eigen::Index>(m))) <= 1e-6);
    }
    GridFunction ga = space.basis.f[0];
    ga += 2.5 * space.basis.f[9];
    const Expansion e = expand_primal(ga, space.schauder, space.dual);
    CHECK(std::abs(e.coeffs[0] - 1.0) <= 1e-6);
    CHECK(std::abs(e.coeffs[9] - 2.5) <= 1e-6);
    CHECK(l2_distance(reconstruct(e, primal), ga) <= 1e-6);
    CHECK(residual(ga, e, primal) <= 1e-6);

    Expansion zero = e;
    zero.coeffs.setZero();
    CHECK(sup_norm(reconstruct(zero, primal)) == 0.0);
    CHECK_THROWS_AS(reconstruct(e, dual), InvalidInput);
  }

  TEST_CASE("prime coefficients of e_1") {
    const SpectralSpace space = build_space(3.0, 13, 2600);
    const Expansion e = expand_primal(sine_mode(1, 2600), space.schauder, space.dual);
    const double t1 = space.tau(1);
    for (std::size_t j : {2u, 3u, 5u, 7u, 11u, 13u}) {
      CHECK(std::abs(e.coeffs[static_cast<Eigen::Index>(j - 1)] + space.tau(j) / (t1 * t1)) <= 1e-10);
    }
  }

  TEST_CASE("q = 2 expansions agree with the sine expansion") {
    const SpectralSpace space = build_space(2.0, 8, 800);
    const GridFunction g = benchmark_source("one", 800);
    const Expansion p = expand_primal(g, space.schauder, space.dual);
    const Expansion d = expand_dual(g, space.basis, space.dual);
    const Eigen::VectorXd s = sine_coeffs(g, 8);
    CHECK((p.coeffs - std::sqrt(2.0) * s).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((d.coeffs - s / std::sqrt(2.0)).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK(residual(sine_mode(1, 800), expand_orthonormal(sine_mode(1, 800), two_sine_family(8, 800)),
                   two_sine_family(8, 800)) <= 1e-10);
  }

  TEST_CASE("Gram-Schmidt") {
    const SampledFamily sines = two_sine_family(6, 600);
    const SampledFamily again = gram_schmidt(sines);
    for (std::size_t n = 0; n < 6; ++n) CHECK(sup_norm(again.functions[n] - sines.functions[n]) <= 1e-12);
    SampledFamily ramps;
    ramps.functions.push_back(GridFunction::sample(100, [](double x) { return x * (1.0 - x); }));
    ramps.functions.push_back(ramps.functions.front());
    CHECK_THROWS_AS(gram_schmidt(ramps), Degeneracy);
  }

  TEST_CASE("random H^s sources are deterministic per seed") {
    const GridFunction a = random_hs(1.5, 64, 0.01, 42, 1000);
    const GridFunction b = random_hs(1.5, 64, 0.01, 42, 1000);
    const GridFunction c = random_hs(1.5, 64, 0.01, 43, 1000);
    CHECK(sup_norm(a - b) == 0.0);
    CHECK(sup_norm(a - c) > 0.0);
    const std::vector<double> coeffs = random_hs_coeffs(1.5, 64, 0.01, 42);
    CHECK(std::abs(sine_coeffs(a, 64)[5] - coeffs[5]) <= 1e-10);
  }

  TEST_CASE("benchmark sources") {
    CHECK_THROWS_AS(benchmark_source("z", 100), InvalidInput);
    const GridFunction c = benchmark_source("c", 700);
    for (std::size_t j = 0; j <= 700; ++j) CHECK(std::abs(c[j] - c[700 - j]) <= 1e-12);
    const GridFunction gb = benchmark_source("gb", 100);
    CHECK(gb[10] == 0.0);
    CHECK(gb[50] == 1.0);
  }

  TEST_CASE("sweep helpers") {
    CHECK(argmin_first({3.0, 1.0, 1.0, 2.0}) == 1);
    const std::vector<double> grid = default_q_grid();
    CHECK(grid.front() == doctest::Approx(1.05));
    CHECK(grid.back() == doctest::Approx(100.0));
    CHECK(parse_expansion_mode("dual") == ExpansionMode::dual);
    CHECK_THROWS_AS(parse_expansion_mode("sideways"), InvalidInput);
  }

  TEST_CASE("residual sweep for the indicator at N = 40") {
    const SweepResult r = qopt_sweep(benchmark_source("b", 4000), 40, {2.0, 3.0, 4.0, 4.25, 4.5, 6.0, 10.0},
                                     ExpansionMode::primal);
    CHECK(r.q_opt == doctest::Approx(4.25));
    CHECK(r.failures.empty());
  }

  TEST_CASE("rate in N for the linear-case q = 2 rows") {
    const RateFit fit = rate_in_N([](std::size_t J) { return benchmark_source("d", J); }, 2.0, {100, 150, 200});
    CHECK(std::abs(fit.slope + 2.0) <= 0.05);
  }
}
