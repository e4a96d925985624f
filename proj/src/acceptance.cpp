#include "qsine/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

#include "qsine/approx.hpp"
#include "qsine/basis.hpp"
#include "qsine/evolution.hpp"
#include "qsine/galerkin.hpp"
#include "qsine/poisson.hpp"
#include "qsine/run.hpp"
#include "qsine/schauder.hpp"

namespace qsine {

namespace {

// Targets are quoted on grids of step 0.05; the slack only absorbs the binary
// representation of grid values.
bool within(double x, double target, double tol) { return std::abs(x - target) <= tol + 1e-9; }

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

struct Builder {
  CriterionResult r;
  bool ok = true;
  std::ostringstream measured;

  void check(bool cond, const std::string& what) {
    ok = ok && cond;
    if (measured.tellp() > 0) measured << "; ";
    measured << what << (cond ? "" : " [FAIL]");
  }
  void info(const std::string& line) { r.info.push_back(line); }
};

GridFunction eigen_source(double p, const GridFunction& f1) {
  const double scale = -(p - 1.0) * std::pow(pi_q(p), p);
  GridFunction g(f1.intervals());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = scale * signed_power(f1[j], p - 1.0);
  return g;
}

void criterion_basis(Builder& b) {
  double worst = 0.0, worst_fd = 0.0, worst_total = 0.0;
  for (double q : {1.2, 1.4, 2.0, 3.0, 5.0, 10.0}) {
    const QSineBasis basis = sample_basis(q, 10, 2000);
    for (std::size_t n = 1; n <= basis.modes; ++n) worst = std::max(worst, pythagorean_residual(basis, n));
    // Same identity with a centred difference in place of the tabulated derivative.
    const GridFunction& f = basis.f[0];
    const double h = f.h(), pq = std::pow(pi_q(q), -q);
    for (std::size_t j = 1; j + 1 < f.size(); ++j) {
      const double d = (f[j + 1] - f[j - 1]) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(std::pow(std::abs(f[j]), q) + pq * std::pow(std::abs(d), q) - 1.0));
    }
    worst_total = std::max(worst_total, std::abs(inverse_integral_total(q) - 0.5));
  }
  const auto [f1, df1] = build_f1(2.0, kDefaultQuadraturePoints, 2000);
  double sin_err = 0.0;
  for (std::size_t j = 0; j < f1.size(); ++j) {
    sin_err = std::max(sin_err, std::abs(f1[j] - std::sin(std::numbers::pi * f1.x(j))));
  }
  b.check(worst <= 1e-6, "Pythagorean residual " + fmt(worst, 3) + " <= 1e-6");
  b.check(sin_err <= 1e-7, "|f1(q=2) - sin|_inf " + fmt(sin_err, 3) + " <= 1e-7");
  b.check(worst_total <= 1e-9, "|f1^-1(1) - 1/2| " + fmt(worst_total, 3) + " <= 1e-9");
  b.info("Pythagorean residual with a centred-difference derivative of f_1 (h = 1/2000): " +
         fmt(worst_fd, 3));
}

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void criterion_schauder(Builder& b) {
  double even = 0.0, bound_ratio = 0.0, tt = 0.0, prime_gap = 0.0, prime_ratio_gap = 0.0;
  for (double q : {1.4, 3.0, 10.0}) {
    const std::size_t J = 10000;
    const auto [f1, df1] = build_f1(q, kDefaultQuadraturePoints, J);
    const TauVector tau = compute_tau(f1, 1000, q);
    // Even coefficients by direct quadrature, not by the symmetry shortcut.
    const TrigTable trig(J);
    std::vector<double> prod(J + 1);
    for (std::size_t j = 2; j <= 40; j += 2) {
      for (std::size_t i = 0; i <= J; ++i) prod[i] = f1[i] * trig.sin(j, i);
      even = std::max(even, std::abs(std::numbers::sqrt2 * simpson(prod, f1.h())));
    }
    for (std::size_t j = 1; j <= 1000; ++j) bound_ratio = std::max(bound_ratio, std::abs(tau(j)) / tau_bound(q, j));
    const SchauderMatrix S = assemble_T(tau, 1000);
    const Eigen::MatrixXd P = S.T * S.T_inv;
    tt = std::max(tt, (P - Eigen::MatrixXd::Identity(1000, 1000)).cwiseAbs().maxCoeff());
    const double a1 = S.T_inv(0, 0);
    for (std::size_t j = 2; j <= 40; ++j) {
      if (!is_prime(j)) continue;
      const double a = S.T_inv(static_cast<Eigen::Index>(j - 1), 0);  // <e_1, f_j*>
      prime_gap = std::max(prime_gap, std::abs(std::abs(a) - std::abs(tau(j) / tau(1))));
      prime_ratio_gap = std::max(prime_ratio_gap, std::abs(std::abs(a / a1) - std::abs(tau(j) / tau(1))));
    }
  }
  b.check(even <= 1e-10, "max |tau(even)| " + fmt(even, 3) + " <= 1e-10");
  b.check(bound_ratio <= 1.0, "max |tau(j)|/bound " + fmt(bound_ratio, 4) + " <= 1");
  b.check(tt <= 1e-10, "|T T^-1 - I| at N=1000 " + fmt(tt, 3) + " <= 1e-10");
  b.check(prime_gap <= 1e-8, "max_p ||<e1,f_p*>| - |tau(p)/tau(1)|| " + fmt(prime_gap, 4) + " <= 1e-8");
  b.info("exact algebra gives <e1,f_p*> = -tau(p)/tau(1)^2; the normalized ratio |<e1,f_p*>/<e1,f_1*>| "
         "matches |tau(p)/tau(1)| to " + fmt(prime_ratio_gap, 3));
}

double biorthogonality_order(double q) {
  std::vector<double> hs, errs;
  for (std::size_t J : {800, 1600, 3200}) {
    hs.push_back(1.0 / static_cast<double>(J));
    errs.push_back(biorthogonality_error(build_space(q, 10, J)));
  }
  return loglog_slope(hs, errs);
}

void criterion_biorthogonality(Builder& b) {
  for (double q : {1.4, 10.0}) {
    const double order = biorthogonality_order(q);
    b.check(order >= 1.7 && order <= 4.5, "q=" + fmt(q) + " order " + fmt(order, 3) + " in [1.7, 4.5]");
  }
}

double regularity(double q) {
  const auto [f1, df1] = build_f1(q, kDefaultQuadraturePoints, 20000);
  return estimate_regularity(compute_tau(f1, 1000, q), 101, 999);
}

void criterion_regularity(Builder& b) {
  const double s_inf = regularity(1e6);
  const double s_14 = regularity(1.4);
  b.check(within(s_inf, 1.5, 0.05), "s(q=1e6) " + fmt(s_inf, 4) + " = 1.5 +- 0.05");
  b.check(s_14 > 2.0, "s(q=1.4) " + fmt(s_14, 4) + " > 2");
}

void criterion_approx(Builder& b) {
  const std::size_t N = 40, J = resolution_intervals(N);
  const std::vector<double> grid = default_q_grid();
  struct Case {
    const char* name;
    double target, tol;
  };
  for (const Case c : {Case{"a", 10.0, 0.2}, Case{"b", 4.25, 0.2}, Case{"c", 2.9, 0.15},
                       Case{"d", 2.55, 0.15}}) {
    const SweepResult r = qopt_sweep(benchmark_source(c.name, J), N, grid, ExpansionMode::primal);
    b.check(within(r.q_opt, c.target, c.tol), std::string("g_") + c.name + " q_opt " + fmt(r.q_opt) +
                                                   " (target " + fmt(c.target) + " +- " + fmt(c.tol) + ")");
  }
  const SweepResult printed = qopt_sweep(benchmark_source("c-printed", J), N, grid, ExpansionMode::primal);
  b.info("g_c with its last piece as printed (g(1) = 4/7): q_opt " + fmt(printed.q_opt));
}

void criterion_rates(Builder& b) {
  std::vector<std::size_t> table_N;
  for (std::size_t n = 5; n <= 100; n += 5) table_N.push_back(n);
  struct Case {
    const char* g;
    double q, target;
  };
  for (const Case c : {Case{"b", 2.0, -0.49}, Case{"c", 3.0, -1.50}, Case{"d", 2.0, -2.0},
                       Case{"sin", 5.0, -1.62}, Case{"sin", 10.0, -1.50}}) {
    const RateFit fit = rate_in_N([&](std::size_t J) { return benchmark_source(c.g, J); }, c.q, table_N);
    b.check(within(fit.slope, c.target, 0.07),
            std::string(c.g) + "/q=" + fmt(c.q) + " " + fmt(fit.slope, 4) + " (" + fmt(c.target) + ")");
  }
  std::vector<std::size_t> extended;
  for (std::size_t n = 100; n <= 400; n += 50) extended.push_back(n);
  for (const Case c : {Case{"b", 2.0, -0.5}, Case{"c", 2.0, -1.5}, Case{"d", 2.0, -2.0}}) {
    const RateFit fit = rate_in_N([&](std::size_t J) { return benchmark_source(c.g, J); }, 2.0, extended);
    b.check(within(fit.slope, c.target, 0.05),
            std::string(c.g) + "/q=2 N=100..400 " + fmt(fit.slope, 4) + " (exact " + fmt(c.target) + ")");
  }
  b.info("rates use N = 5,10,...,100 on the resolution-rule grid of each N");
}

void criterion_exact(Builder& b) {
  const std::size_t J = 20000;
  for (double p : {1.5, 3.0, 5.0, 10.0}) {
    const auto [f1, df1] = build_f1(p, kDefaultQuadraturePoints, J);
    const ExactSolution sol = exact_solution({p, eigen_source(p, f1)});
    const double err = l2_distance(sol.u, f1);
    b.check(err <= 1e-5, "p=" + fmt(p) + " L2 " + fmt(err, 3));
  }
  const GridFunction g = GridFunction::sample(J, [](double x) {
    return -std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * x);
  });
  const GridFunction s = GridFunction::sample(J, [](double x) { return std::sin(std::numbers::pi * x); });
  const double err = l2_distance(exact_solution({2.0, g}).u, s);
  b.check(err <= 1e-8, "p=2 sine oracle L2 " + fmt(err, 3) + " <= 1e-8");
}

GridFunction random_source(std::mt19937_64& rng, std::size_t J) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double s = 0.5 + 2.0 * u(rng);
  GridFunction g = random_hs(s, 64, 0.01, rng(), J);
  const double scale = 0.2 + 5.0 * u(rng);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = scale * g[j] + (u(rng) < 0.5 ? 0.0 : 0.3 * scale);
  return g;
}

void criterion_stability(Builder& b, const std::filesystem::path& audit_csv) {
  std::mt19937_64 rng(20240617);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t J = 2000, trials = 120;
  std::size_t bound_ok = 0, lemma_ok = 0;
  double worst_ratio = 0.0;
  double low_sum = 0.0, high_sum = 0.0;  // mean gap/bound for p < 3 and p > 6
  std::size_t low_n = 0, high_n = 0;
  std::ofstream csv;
  if (!audit_csv.empty()) {
    csv.open(audit_csv, std::ios::binary);
    csv << "trial,p,gap,bound,ratio\n";
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const double p = 1.2 + 8.8 * u(rng);
    const GridFunction g = random_source(rng, J);
    GridFunction gt = g;
    if (u(rng) < 0.5) {
      const GridFunction d = random_source(rng, J);
      const double eps = std::pow(10.0, -3.0 * u(rng));
      for (std::size_t j = 0; j < gt.size(); ++j) gt[j] += eps * d[j];
    } else {
      gt = random_source(rng, J);
    }
    const double gap = l2_distance(exact_solution({p, g}).u, exact_solution({p, gt}).u);
    const double bound = stability_bound(g, gt, p);
    const double ratio = bound > 0.0 ? gap / bound : 0.0;
    worst_ratio = std::max(worst_ratio, ratio);
    if (p < 3.0) {
      low_sum += ratio;
      ++low_n;
    } else if (p > 6.0) {
      high_sum += ratio;
      ++high_n;
    }
    if (gap <= bound) ++bound_ok;
    if (csv) csv << t << ',' << format_real(p) << ',' << format_real(gap) << ',' << format_real(bound) << ','
                 << format_real(ratio) << '\n';
    const double n1 = l1_norm(g);
    double gamma = (2.0 * u(rng) - 1.0) * n1, mu = (2.0 * u(rng) - 1.0) * n1;
    if (gamma > mu) std::swap(gamma, mu);
    const auto [lhs, rhs] = lemma_cases_gap(g, gamma, mu, 1.0 / (p - 1.0));
    if (lhs <= rhs * (1.0 + 1e-12) + 1e-15) ++lemma_ok;
  }
  b.check(bound_ok == trials, "stability bound held in " + std::to_string(bound_ok) + "/" + std::to_string(trials) +
                                  " triples (max gap/bound " + fmt(worst_ratio, 3) + ")");
  b.check(lemma_ok == trials, "case estimate held in " + std::to_string(lemma_ok) + "/" + std::to_string(trials));
  b.info("mean gap/bound: " + fmt(low_sum / static_cast<double>(std::max<std::size_t>(low_n, 1)), 3) +
         " for p < 3, " + fmt(high_sum / static_cast<double>(std::max<std::size_t>(high_n, 1)), 3) + " for p > 6");
}

double jacobian_fd_error(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = 1.5 + 8.5 * u(rng), q = 1.3 + 8.0 * u(rng);
  const std::size_t N = 8, J = 800;
  const SpectralSpace space = build_space(q, N, J);
  const GalerkinSystem sys = make_system(p, space, benchmark_source("b", J), Pairing::primal);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd c(N);
  for (std::size_t i = 0; i < N; ++i) c[static_cast<Eigen::Index>(i)] = normal(rng) / static_cast<double>(i + 1);
  const Eigen::MatrixXd Ja = assemble_jacobian(c, sys);
  Eigen::MatrixXd Jf(N, N);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(N); ++k) {
    const double step = 1e-6 * (1.0 + std::abs(c[k]));
    Eigen::VectorXd cp = c, cm = c;
    cp[k] += step;
    cm[k] -= step;
    Jf.col(k) = (assemble_residual(cp, sys) - assemble_residual(cm, sys)) / (2.0 * step);
  }
  return (Ja - Jf).norm() / Ja.norm();
}

void criterion_galerkin(Builder& b) {
  std::mt19937_64 rng(4242);
  double fd = 0.0;
  for (int i = 0; i < 20; ++i) fd = std::max(fd, jacobian_fd_error(rng));
  b.check(fd <= 1e-5, "Jacobian FD relative error " + fmt(fd, 3) + " <= 1e-5");

  const std::size_t N = 40, J = resolution_intervals(N);
  const std::vector<double> grid = parse_real_list("1.05:0.05:10");
  struct Case {
    const char* g;
    double p, target, tol;
  };
  std::ostringstream ref_protocol;
  for (const Case c : {Case{"b", 1.8, 2.05, 0.1}, Case{"b", 5.0, 3.9, 0.15}, Case{"b", 10.0, 5.75, 0.25},
                       Case{"one", 5.0, 3.0, 0.15}, Case{"one", 10.0, 4.85, 0.25}}) {
    const GridFunction g = benchmark_source(c.g, J);
    const SolverSweepResult r = solver_qopt_sweep(c.p, g, N, grid);
    b.check(within(r.q_opt, c.target, c.tol) && r.failures.empty(),
            std::string("g=") + c.g + " p=" + fmt(c.p) + " q_opt " + fmt(r.q_opt) + " (" + fmt(c.target) + ")");
    const ReferenceSolution ref = reference_solution(c.p, g, N);
    const SolverSweepResult rp = solver_qopt_sweep_against(c.p, g, N, grid, ref.galerkin);
    ref_protocol << (ref_protocol.tellp() > 0 ? ", " : "") << c.g << "/p=" << fmt(c.p) << " " << fmt(rp.q_opt);
  }
  b.info("q_opt with errors against the q = 2, 2N-mode solution instead of the exact one: " + ref_protocol.str());

  const SolverSweepResult r3 = solver_qopt_sweep(3.0, benchmark_source("b", J), N, grid);
  std::vector<double> errs;
  for (const auto& pt : r3.points) errs.push_back(pt.l2_error);
  bool near2 = false, near295 = false;
  std::ostringstream mins;
  for (std::size_t i : local_minima(errs)) {
    const double q = r3.points[i].q;
    mins << (mins.tellp() > 0 ? "," : "") << fmt(q);
    near2 = near2 || within(q, 2.0, 0.15);
    near295 = near295 || within(q, 2.95, 0.15);
  }
  b.check(near2 && near295, "p=3 local minima {" + mins.str() + "} (expected near 2.0 and 2.95)");
}

void criterion_evolution(Builder& b) {
  const std::size_t N = 40, J = resolution_intervals(N);
  const GridFunction g = benchmark_source("b", J);
  const GridFunction exact = exact_solution({10.0, g}).u;
  std::vector<double> finals;
  double fixed_gap = 0.0;
  for (double q : {1.8, 2.0, 5.75, 10.0}) {
    const SpectralSpace space = q == 2.0 ? two_sine_space(N, J) : build_space(q, N, J);
    const EvolutionOperator op = make_operator(10.0, space, g, Pairing::petrov, 0);
    EvolutionConfig cfg;
    cfg.p = 10.0;
    cfg.q = q;
    cfg.N = N;
    cfg.J = J;
    cfg.dt = 0.01;
    cfg.T = 3.0;
    cfg.snapshot_times = {cfg.T};
    const Trajectory tr = evolve(cfg, op, exact);
    finals.push_back(tr.failed ? INFINITY : tr.error_series.back());
    const SolveReport fixed = steady_state(op, 1.0);
    GalerkinSystem sys = op.sys;
    const SolveReport direct = solve_ppoisson(sys);
    fixed_gap = std::max(fixed_gap, fixed.converged && direct.converged
                                        ? (fixed.coeffs - direct.coeffs).cwiseAbs().maxCoeff()
                                        : INFINITY);
  }
  b.check(fixed_gap <= 1e-8, "fixed point vs steady solve " + fmt(fixed_gap, 3) + " <= 1e-8");
  const bool smallest = finals[2] < finals[0] && finals[2] < finals[1] && finals[2] < finals[3];
  b.check(smallest, "L2 error at T=3 for q=1.8,2,5.75,10: " + fmt(finals[0], 3) + ", " + fmt(finals[1], 3) +
                        ", " + fmt(finals[2], 3) + ", " + fmt(finals[3], 3));
  b.check(finals[1] / finals[2] >= 3.0, "ratio q=2 / q=5.75 " + fmt(finals[1] / finals[2], 3) + " >= 3");
}

struct EnsembleCheck {
  double worst_ratio = 0.0;      // max over snapshots of ||mean - det|| / ||SE||
  double worst_fraction = 1.0;   // min over snapshots of the share of nodes within 3 SE
};

EnsembleCheck ensemble_check(double p, double q, std::size_t realizations) {
  const std::size_t N = 40, J = resolution_intervals(N);
  const GridFunction g = benchmark_source("b", J);
  const SpectralSpace space = q == 2.0 ? two_sine_space(N, J) : build_space(q, N, J);
  EvolutionConfig cfg;
  cfg.p = p;
  cfg.q = q;
  cfg.N = N;
  cfg.J = J;
  cfg.dt = 0.01;
  cfg.T = 1.0;
  cfg.snapshot_times = {0.1, 0.25, 0.5, 1.0};
  cfg.nu = 0.2;
  cfg.noise.kind = NoiseKind::white;
  cfg.noise.M = 4 * N;
  cfg.seed = 12345;
  const EvolutionOperator op = make_operator(p, space, g, Pairing::petrov, cfg.noise.M);
  EvolutionConfig det_cfg = cfg;
  det_cfg.nu = 0.0;
  const Trajectory det = evolve(det_cfg, op);
  const EnsembleResult ens = ensemble(cfg, op, realizations);
  EnsembleCheck out;
  for (std::size_t i = 0; i < ens.times.size(); ++i) {
    out.worst_ratio = std::max(out.worst_ratio, l2_distance(ens.mean[i], det.snapshots[i]) /
                                                    l2_norm(ens.standard_error[i]));
    std::size_t inside = 0;
    for (std::size_t j = 1; j < J; ++j) {
      if (std::abs(ens.mean[i][j] - det.snapshots[i][j]) <= 3.0 * ens.standard_error[i][j]) ++inside;
    }
    out.worst_fraction = std::min(out.worst_fraction, static_cast<double>(inside) / static_cast<double>(J - 1));
  }
  return out;
}

void criterion_stochastic(Builder& b) {
  const std::size_t draws = 10000, M = 8, J = 400;
  const double dt = 0.01;
  NoiseSpec noise;
  noise.kind = NoiseKind::white;
  noise.M = M;
  Rng rng(777);
  std::vector<GridFunction> modes;
  for (std::size_t m = 1; m <= M; ++m) modes.push_back(sine_mode(m, J));
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(M, M);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(M);
  for (std::size_t d = 0; d < draws; ++d) {
    const GridFunction w = wiener_increment(noise, dt, J, rng);
    Eigen::VectorXd a(M);
    for (std::size_t m = 0; m < M; ++m) a[static_cast<Eigen::Index>(m)] = inner(w, modes[m]);
    mean += a;
    cov += a * a.transpose();
  }
  mean /= static_cast<double>(draws);
  cov = (cov - static_cast<double>(draws) * mean * mean.transpose()) / static_cast<double>(draws - 1);
  const double cov_err = (cov - dt * Eigen::MatrixXd::Identity(M, M)).cwiseAbs().maxCoeff() / dt;
  b.check(cov_err <= 0.05, "white-noise covariance max|C - dt I|/dt " + fmt(cov_err, 3) + " <= 0.05");

  const EnsembleCheck lin = ensemble_check(2.0, 2.0, 50);
  b.check(lin.worst_fraction == 1.0,
          "p=2: nodes within 3 SE at every snapshot " + fmt(100.0 * lin.worst_fraction, 4) + "%");
  b.info("p=2: max_t ||mean - det||_2 / ||SE||_2 = " + fmt(lin.worst_ratio, 3));
  // The noisy regime of interest: p = 10 with the optimal basis.
  const EnsembleCheck nl = ensemble_check(10.0, 5.75, 50);
  b.check(nl.worst_fraction == 1.0,
          "p=10, q=5.75: nodes within 3 SE at every snapshot " + fmt(100.0 * nl.worst_fraction, 4) + "%");
  b.info("p=10: max_t ||mean - det||_2 / ||SE||_2 = " + fmt(nl.worst_ratio, 3) +
         "; the drift is stable under dt refinement, a nonlinear noise effect");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_reproducibility(Builder& b, const std::filesystem::path& scratch) {
  struct Job {
    std::string command;
    std::map<std::string, std::string> params;
  };
  const std::vector<Job> jobs = {
      {"evolve", {{"p", "3"}, {"q", "2.5"}, {"N", "10"}, {"T", "0.1"}, {"nu", "0.2"}, {"realizations", "3"},
                  {"noise", "sobolev"}}},
      {"approx-sweep", {{"g", "random"}, {"N", "10"}, {"q_grid", "1.5,2,3"}, {"modes", "64"}}},
  };
  std::size_t identical = 0, files = 0;
  std::ostringstream sink;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::vector<std::filesystem::path> dirs;
    std::vector<RunResult> results;
    for (int rep = 0; rep < 2; ++rep) {
      RunConfig cfg;
      cfg.command = jobs[i].command;
      cfg.params = jobs[i].params;
      cfg.seed = 99;
      cfg.output_dir = scratch / ("job" + std::to_string(i) + "_" + std::to_string(rep));
      std::filesystem::remove_all(cfg.output_dir);
      results.push_back(run(cfg, sink));
      dirs.push_back(cfg.output_dir);
    }
    for (const std::string& name : results[0].outputs) {
      ++files;
      const std::string a = slurp(dirs[0] / name), c = slurp(dirs[1] / name);
      if (results[0].exit_code == 0 && results[1].exit_code == 0 && !a.empty() && a == c) ++identical;
    }
  }
  std::filesystem::remove_all(scratch);
  b.check(files > 0 && identical == files,
          std::to_string(identical) + "/" + std::to_string(files) + " CSV outputs byte-identical across reruns");
}

const char* criterion_name(int id) {
  switch (id) {
    case 1: return "basis identities";
    case 2: return "Schauder structure";
    case 3: return "biorthogonality convergence";
    case 4: return "regularity estimator";
    case 5: return "approximation sweeps";
    case 6: return "rate table";
    case 7: return "exact p-Poisson solver";
    case 8: return "stability bound audit";
    case 9: return "Galerkin solver";
    case 10: return "evolution, deterministic";
    case 11: return "evolution, stochastic";
    case 12: return "reproducibility";
  }
  return "?";
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"all",       "basis-identities", "schauder", "biorthogonality", "regularity", "approx",
          "tables",    "poisson",          "stability", "galerkin",       "evolution",  "stochastic",
          "reproducibility"};
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  if (suite == "basis-identities") return {1, 2, 3};
  if (suite == "schauder") return {2};
  if (suite == "biorthogonality") return {3};
  if (suite == "regularity") return {4};
  if (suite == "approx") return {5};
  if (suite == "tables") return {6, 9};
  if (suite == "poisson") return {7};
  if (suite == "stability") return {8};
  if (suite == "galerkin") return {9};
  if (suite == "evolution") return {10};
  if (suite == "stochastic") return {11};
  if (suite == "reproducibility") return {12};
  // A bare criterion number selects that criterion.
  try {
    std::size_t used = 0;
    const int id = std::stoi(suite, &used);
    if (used == suite.size() && id >= 1 && id <= 12) return {id};
  } catch (const std::exception&) {
  }
  throw UsageError("unknown suite '" + suite + "'");
}

CriterionResult run_criterion(int id, const AcceptanceContext& context) {
  Builder b;
  b.r.id = id;
  b.r.name = criterion_name(id);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: criterion_basis(b); break;
      case 2: criterion_schauder(b); break;
      case 3: criterion_biorthogonality(b); break;
      case 4: criterion_regularity(b); break;
      case 5: criterion_approx(b); break;
      case 6: criterion_rates(b); break;
      case 7: criterion_exact(b); break;
      case 8: criterion_stability(b, context.audit_csv); break;
      case 9: criterion_galerkin(b); break;
      case 10: criterion_evolution(b); break;
      case 11: criterion_stochastic(b); break;
      case 12: {
        const auto dir = context.scratch_dir.empty()
                             ? std::filesystem::temp_directory_path() / "qsine_repro"
                             : context.scratch_dir;
        criterion_reproducibility(b, dir);
        break;
      }
      default: throw UsageError("criterion ids are 1..12");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    b.check(false, std::string("error: ") + e.what());
  }
  b.r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  b.r.pass = b.ok;
  b.r.measured = b.measured.str();
  return b.r;
}

void print_result(std::ostream& out, const CriterionResult& r) {
  out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " (" << fmt(r.seconds, 3)
      << " s): " << r.measured << '\n';
  for (const auto& line : r.info) out << "         info: " << line << '\n';
}

}  // namespace qsine
