#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsine/approx.hpp"
#include "qsine/evolution.hpp"
#include "qsine/poisson.hpp"

using namespace qsine;
using std::numbers::pi;

namespace {
EvolutionConfig small_config(double p, double q) {
  EvolutionConfig c;
  c.p = p;
  c.q = q;
  c.N = 8;
  c.J = 800;
  c.dt = 0.01;
  c.T = 0.2;
  return c;
}
}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("noise parsing and spec") {
    CHECK(parse_noise_kind("h1") == NoiseKind::sobolev);
    CHECK(parse_noise_kind("white") == NoiseKind::white);
    CHECK_THROWS_AS(parse_noise_kind("pink"), InvalidInput);
    NoiseSpec s;
    s.kind = NoiseKind::white;
    s.M = 4;
    CHECK((s.sqrt_alpha().array() == 1.0).all());
    s.kind = NoiseKind::sobolev;
    CHECK(s.sqrt_alpha()[3] < s.sqrt_alpha()[0]);
  }

  TEST_CASE("Wiener increments") {
    NoiseSpec noise;
    noise.kind = NoiseKind::sobolev;
    noise.M = 6;
    const double dt = 0.02;
    Rng rng(9);
    const GridFunction e1 = sine_mode(1, 300);
    double sum = 0.0, sum2 = 0.0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
      const double a = inner(wiener_increment(noise, dt, 300, rng), e1);
      sum += a;
      sum2 += a * a;
    }
    const double var = (sum2 - sum * sum / draws) / (draws - 1);
    const double alpha1 = noise.sqrt_alpha()[0] * noise.sqrt_alpha()[0];
    CHECK(std::abs(var / (alpha1 * dt) - 1.0) <= 0.05);

    Rng a(realization_seed(5, 2)), b(realization_seed(5, 2));
    CHECK(sup_norm(wiener_increment(noise, dt, 300, a) - wiener_increment(noise, dt, 300, b)) == 0.0);
    CHECK(realization_seed(5, 2) != realization_seed(5, 3));
  }

  TEST_CASE("equilibrium and linear recursion") {
    const SpectralSpace space = build_space(2.0, 8, 800);
    const EvolutionOperator zero = make_operator(3.0, space, GridFunction(800), Pairing::petrov, 0);
    const SolveReport r = step_implicit_euler(Eigen::VectorXd::Zero(8), zero, 0.01, Eigen::VectorXd::Zero(8));
    CHECK(r.converged);
    CHECK(r.coeffs.cwiseAbs().maxCoeff() == 0.0);

    // p = 2, q = 2 with the petrov pairing decouples into scalar recursions.
    const EvolutionOperator op = make_operator(2.0, space, benchmark_source("b", 800), Pairing::petrov, 0);
    const EvolutionConfig cfg = small_config(2.0, 2.0);
    const Trajectory tr = evolve(cfg, op);
    REQUIRE_FALSE(tr.failed);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(8);
    for (std::size_t k = 0; k < cfg.steps(); ++k) {
      for (Eigen::Index n = 0; n < 8; ++n) {
        const double lambda = std::pow(static_cast<double>(n + 1) * pi, 2);
        c[n] = (c[n] + cfg.dt * op.sys.rhs[n]) / (1.0 + cfg.dt * lambda);
      }
    }
    CHECK((tr.coeff_history.back() - c).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("deterministic runs are reproducible and ignore the noise size") {
    const SpectralSpace space = build_space(3.0, 8, 800);
    const GridFunction g = benchmark_source("b", 800);
    const EvolutionOperator op = make_operator(4.0, space, g, Pairing::petrov, 32);
    const EvolutionConfig cfg = small_config(4.0, 3.0);
    const Trajectory a = evolve(cfg, op), b = evolve(cfg, op);
    EvolutionConfig other = cfg;
    other.noise.M = 64;
    const Trajectory c = evolve(other, make_operator(4.0, space, g, Pairing::petrov, 64));
    CHECK((a.coeff_history.back() - b.coeff_history.back()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.coeff_history.back() - c.coeff_history.back()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("noise scales with nu and validate checks the mode count") {
    EvolutionConfig cfg = small_config(2.0, 2.0);
    cfg.noise.kind = NoiseKind::white;
    cfg.noise.M = 8;
    cfg.nu = 0.1;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg.noise.M = 32;
    const SpectralSpace space = build_space(2.0, 8, 800);
    const EvolutionOperator op = make_operator(2.0, space, GridFunction(800), Pairing::petrov, 32);
    const Trajectory small = evolve(cfg, op, std::nullopt, 11);
    cfg.nu = 0.2;
    const Trajectory big = evolve(cfg, op, std::nullopt, 11);
    // Linear with g = 0: the state is proportional to nu for a fixed noise path.
    CHECK((big.coeff_history.back() - 2.0 * small.coeff_history.back()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("error against the steady state decreases for the heat flow") {
    const std::size_t J = 800;
    const GridFunction g = benchmark_source("b", J);
    const SpectralSpace space = build_space(2.0, 8, J);
    const EvolutionOperator op = make_operator(2.0, space, g, Pairing::petrov, 0);
    EvolutionConfig cfg = small_config(2.0, 2.0);
    cfg.T = 0.5;
    const Trajectory tr = evolve(cfg, op, exact_solution({2.0, g}).u);
    for (std::size_t k = 1; k < tr.error_series.size(); ++k) CHECK(tr.error_series[k] <= tr.error_series[k - 1]);
    const std::vector<double> e = error_vs_time(tr, tr.snapshots.front());
    CHECK(e.front() == 0.0);
  }

  TEST_CASE("steady state coincides with the Galerkin solve") {
    const SpectralSpace space = build_space(4.0, 8, 800);
    const EvolutionOperator op = make_operator(6.0, space, benchmark_source("one", 800), Pairing::petrov, 0);
    const SolveReport fixed = steady_state(op, 1.0);
    GalerkinSystem sys = op.sys;
    const SolveReport direct = solve_ppoisson(sys);
    REQUIRE(fixed.converged);
    CHECK((fixed.coeffs - direct.coeffs).cwiseAbs().maxCoeff() <= 1e-8);
  }

  TEST_CASE("ensemble statistics have the right shape") {
    EvolutionConfig cfg = small_config(2.0, 2.0);
    cfg.nu = 0.1;
    cfg.noise.kind = NoiseKind::white;
    cfg.noise.M = 32;
    cfg.seed = 4;
    cfg.snapshot_times = {0.1, 0.2};
    const EvolutionOperator op =
        make_operator(2.0, build_space(2.0, 8, 800), benchmark_source("b", 800), Pairing::petrov, 32);
    const EnsembleResult e = ensemble(cfg, op, 6);
    CHECK(e.times.size() == 2);
    CHECK(e.mean.size() == 2);
    CHECK(e.realizations == 6);
    CHECK(e.failures == 0);
    CHECK(sup_norm(e.standard_error[1]) > 0.0);
  }
}
