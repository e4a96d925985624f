#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsine/approx.hpp"
#include "qsine/basis.hpp"
#include "qsine/poisson.hpp"

using namespace qsine;
using std::numbers::pi;

namespace {
GridFunction minus_pi2_sin(std::size_t J) {
  return GridFunction::sample(J, [](double x) { return -pi * pi * std::sin(pi * x); });
}
}  // namespace

TEST_SUITE("poisson") {
  TEST_CASE("volterra") {
    CHECK(sup_norm(volterra(GridFunction(100))) == 0.0);
    const GridFunction x = volterra(GridFunction::sample(100, [](double) { return 1.0; }));
    for (std::size_t j = 0; j <= 100; ++j) CHECK(std::abs(x[j] - x.x(j)) <= 1e-14);
    const GridFunction v = volterra(minus_pi2_sin(2000));
    double err = 0.0;
    for (std::size_t j = 0; j <= 2000; ++j) err = std::max(err, std::abs(v[j] - pi * (std::cos(pi * v.x(j)) - 1.0)));
    CHECK(err <= 1e-9);
  }

  TEST_CASE("signed power") {
    CHECK(signed_power(-4.0, 0.5) == doctest::Approx(-2.0));
    CHECK(signed_power(0.0, 0.3) == 0.0);
    CHECK(signed_power(-2.0, 3.0) == doctest::Approx(-8.0));
  }

  TEST_CASE("h and its root") {
    const GridFunction one = GridFunction::sample(200, [](double) { return 1.0; });
    const GridFunction V = volterra(one);
    CHECK(h_of_gamma(V, -0.5, 0.7) > 0.0);
    CHECK(h_of_gamma(V, 1.5, 0.7) < 0.0);
    CHECK(std::abs(h_of_gamma(V, 0.5, 0.7)) <= 1e-12);
    for (double p : {1.3, 2.0, 7.0}) CHECK(std::abs(gamma0({p, one}) - 0.5) <= 1e-10);
    CHECK(gamma0({3.0, GridFunction(200)}) == 0.0);
    CHECK(std::abs(gamma0({2.0, minus_pi2_sin(2000)}) + pi) <= 1e-8);
    CHECK_THROWS_AS(PPoissonProblem(1.0, one), InvalidInput);
  }

  TEST_CASE("exact solution oracles") {
    const GridFunction s = GridFunction::sample(2000, [](double x) { return std::sin(pi * x); });
    CHECK(l2_distance(exact_solution({2.0, minus_pi2_sin(2000)}).u, s) <= 1e-8);
    for (double p : {1.5, 4.0}) {
      const auto [f1, df1] = build_f1(p, kDefaultQuadraturePoints, 4000);
      GridFunction g(4000);
      for (std::size_t j = 0; j <= 4000; ++j) g[j] = -(p - 1.0) * std::pow(pi_q(p), p) * signed_power(f1[j], p - 1.0);
      CHECK(l2_distance(exact_solution({p, g}).u, f1) <= 1e-6);
    }
    // g = 1 is symmetric, so the solution is too. At p = 10 this needs gamma0 to
    // full precision: the slope is |Vg - gamma0|^(1/9).
    const ExactSolution u = exact_solution({10.0, GridFunction::sample(1000, [](double) { return 1.0; })});
    for (std::size_t j = 0; j <= 1000; ++j) CHECK(std::abs(u.u[j] - u.u[1000 - j]) <= 1e-12);
    const ExactSolution u3 = exact_solution({3.0, GridFunction::sample(1000, [](double) { return 1.0; })});
    for (std::size_t j = 0; j <= 1000; ++j) CHECK(std::abs(u3.u[j] - u3.u[1000 - j]) <= 1e-12);
    CHECK(u.u[0] == 0.0);
    CHECK(u.u[1000] == 0.0);
    CHECK(std::abs(u.closure_defect) <= 1e-13);
  }

  TEST_CASE("stability bound and case estimate") {
    const GridFunction g = benchmark_source("b", 1000);
    CHECK(stability_bound(g, g, 3.0) == 0.0);
    CHECK_THROWS_AS(stability_bound(g, g, 1.0), InvalidInput);

    const GridFunction one = GridFunction::sample(1000, [](double) { return 1.0; });
    const auto [l0, r0] = lemma_cases_gap(one, 0.3, 0.3, 1.0);
    CHECK(l0 == 0.0);
    CHECK(r0 == 0.0);
    const auto [l, r] = lemma_cases_gap(one, 0.0, 0.25, 1.0);
    CHECK(l == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(r == doctest::Approx(0.25).epsilon(1e-10));
    CHECK_THROWS_AS(lemma_cases_gap(one, 0.5, 0.25, 1.0), InvalidInput);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
      const double p = 1.2 + 8.8 * u(rng);
      const GridFunction a = random_hs(1.0, 32, 0.01, rng(), 1000);
      const GridFunction b = random_hs(1.0, 32, 0.01, rng(), 1000);
      const double gap = l2_distance(exact_solution({p, a}).u, exact_solution({p, b}).u);
      CHECK(gap <= stability_bound(a, b, p));
      const double n1 = l1_norm(a);
      double gamma = (2.0 * u(rng) - 1.0) * n1, mu = (2.0 * u(rng) - 1.0) * n1;
      if (gamma > mu) std::swap(gamma, mu);
      const auto [lhs, rhs] = lemma_cases_gap(a, gamma, mu, 1.0 / (p - 1.0));
      CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-15);
    }
  }
}
