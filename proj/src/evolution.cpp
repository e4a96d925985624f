#include "qsine/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsine/approx.hpp"

namespace qsine {

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "none") return NoiseKind::none;
  if (name == "white") return NoiseKind::white;
  if (name == "sobolev" || name == "h1") return NoiseKind::sobolev;
  throw InvalidInput("unknown noise kind '" + name + "' (expected none, white or sobolev)");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::white: return "white";
    case NoiseKind::sobolev: return "sobolev";
  }
  return "?";
}

Eigen::VectorXd NoiseSpec::sqrt_alpha() const {
  Eigen::VectorXd a(static_cast<Eigen::Index>(M));
  for (std::size_t m = 1; m <= M; ++m) {
    const double mm = static_cast<double>(m);
    switch (kind) {
      case NoiseKind::none: a[m - 1] = 0.0; break;
      case NoiseKind::white: a[m - 1] = 1.0; break;
      case NoiseKind::sobolev:
        a[m - 1] = std::pow(1.0 + mm * mm, -0.5 * s) * std::pow(mm, -0.5 - delta);
        break;
    }
  }
  return a;
}

std::uint64_t realization_seed(std::uint64_t base, std::uint64_t r) {
  // splitmix64 finalizer over a counter
  std::uint64_t z = base + (r + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::VectorXd wiener_mode_increments(const NoiseSpec& noise, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  const Eigen::VectorXd a = noise.sqrt_alpha();
  Eigen::VectorXd db(a.size());
  for (Eigen::Index m = 0; m < a.size(); ++m) db[m] = a[m] * normal(rng);
  return db;
}

GridFunction wiener_increment(const NoiseSpec& noise, double dt, std::size_t intervals, Rng& rng) {
  const Eigen::VectorXd db = wiener_mode_increments(noise, dt, rng);
  const TrigTable trig(intervals);
  GridFunction w(intervals);
  for (std::size_t m = 1; m <= noise.M; ++m) {
    const double a = std::numbers::sqrt2 * db[static_cast<Eigen::Index>(m - 1)];
    for (std::size_t j = 0; j <= intervals; ++j) w[j] += a * trig.sin(m, j);
  }
  return w;
}

EvolutionOperator make_operator(double p, const SpectralSpace& space, const GridFunction& g,
                                Pairing pairing, std::size_t noise_modes) {
  EvolutionOperator op;
  op.sys = make_system(p, space, g, pairing);
  op.sys.eps_reg = regularization_for(linear_solve(op.sys), op.sys);
  op.identity_mass = pairing == Pairing::petrov;
  const auto n = static_cast<Eigen::Index>(op.sys.N);
  op.mass = op.identity_mass ? Eigen::MatrixXd::Identity(n, n) : mass_matrix(op.sys);
  const std::size_t J = op.sys.intervals();
  const TrigTable trig(J);
  RowMatrix modes(static_cast<Eigen::Index>(noise_modes), static_cast<Eigen::Index>(J + 1));
  for (std::size_t m = 1; m <= noise_modes; ++m) {
    for (std::size_t j = 0; j <= J; ++j) {
      modes(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(j)) =
          std::numbers::sqrt2 * trig.sin(m, j);
    }
  }
  op.noise_projection = op.sys.test_f * op.sys.weights.asDiagonal() * modes.transpose();
  return op;
}

namespace {

SolveReport euler_solve(const Eigen::VectorXd& c_n, const EvolutionOperator& op, double dt,
                        const Eigen::VectorXd& forcing, const NewtonOptions& options) {
  const GalerkinSystem& sys = op.sys;
  auto F = [&](const Eigen::VectorXd& c) -> Eigen::VectorXd {
    Eigen::VectorXd r = dt * (stiffness_action(c, sys, sys.p) - sys.rhs) - forcing;
    if (op.identity_mass) {
      r += c - c_n;
    } else {
      r += op.mass * (c - c_n);
    }
    return r;
  };
  auto Jac = [&](const Eigen::VectorXd& c) -> Eigen::MatrixXd {
    Eigen::MatrixXd J = dt * stiffness_jacobian(c, sys, sys.p);
    J += op.mass;
    return J;
  };
  SolveReport report = solve_nonlinear(F, Jac, c_n, options);
  report.eps_reg = sys.eps_reg;
  return report;
}

}  // namespace

SolveReport step_implicit_euler(const Eigen::VectorXd& c_n, const EvolutionOperator& op,
                                double dt, const Eigen::VectorXd& forcing,
                                const NewtonOptions& options) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (static_cast<std::size_t>(c_n.size()) != op.sys.N ||
      static_cast<std::size_t>(forcing.size()) != op.sys.N) {
    throw InvalidInput("coefficient and forcing lengths must equal N");
  }
  SolveReport report = euler_solve(c_n, op, dt, forcing, options);
  if (report.converged) return report;
  const Eigen::VectorXd half = 0.5 * forcing;
  SolveReport first = euler_solve(c_n, op, 0.5 * dt, half, options);
  if (!first.converged) {
    first.message = "step failed after halving dt: " + first.message;
    return first;
  }
  SolveReport second = euler_solve(first.coeffs, op, 0.5 * dt, half, options);
  second.iterations += first.iterations + report.iterations;
  if (!second.converged) second.message = "step failed after halving dt: " + second.message;
  return second;
}

std::size_t EvolutionConfig::intervals() const { return J > 0 ? J : resolution_intervals(N); }

std::size_t EvolutionConfig::steps() const {
  return static_cast<std::size_t>(std::llround(std::ceil(T / dt - 1e-9)));
}

void EvolutionConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(T >= dt)) throw InvalidInput("T must be at least dt");
  if (!(p > 1.0)) throw InvalidInput("p must exceed 1");
  if (N == 0) throw InvalidInput("N must be positive");
  if (!(nu >= 0.0)) throw InvalidInput("nu must be non-negative");
  if (nu > 0.0 && noise.kind != NoiseKind::none && noise.M < 4 * N) {
    throw InvalidInput("noise needs M >= 4N modes");
  }
}

GridFunction reconstruct(const Eigen::VectorXd& c, const EvolutionOperator& op) {
  return reconstruct(c, op.sys);
}

Trajectory evolve(const EvolutionConfig& config, const EvolutionOperator& op,
                  const std::optional<GridFunction>& reference, std::uint64_t stream_seed) {
  config.validate();
  const bool noisy = config.nu > 0.0 && config.noise.kind != NoiseKind::none;
  if (noisy && static_cast<std::size_t>(op.noise_projection.cols()) < config.noise.M) {
    throw InvalidInput("operator has fewer noise modes than the noise spec");
  }
  Rng rng(stream_seed);
  const auto n = static_cast<Eigen::Index>(op.sys.N);
  const std::size_t K = config.steps();

  std::vector<double> wanted = config.snapshot_times;
  std::sort(wanted.begin(), wanted.end());
  std::size_t next_snap = 0;

  Trajectory traj;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  auto record = [&](std::size_t k) {
    const double t = static_cast<double>(k) * config.dt;
    traj.step_times.push_back(t);
    traj.coeff_history.push_back(c);
    GridFunction u;
    const bool snap_all = wanted.empty();
    const bool need_u = reference.has_value() || snap_all ||
                        (next_snap < wanted.size() && t >= wanted[next_snap] - 1e-12);
    if (need_u) u = reconstruct(c, op);
    if (reference) traj.error_series.push_back(l2_distance(u, *reference));
    if (snap_all) {
      traj.times.push_back(t);
      traj.snapshots.push_back(u);
    } else {
      while (next_snap < wanted.size() && t >= wanted[next_snap] - 1e-12) {
        traj.times.push_back(t);
        traj.snapshots.push_back(u);
        ++next_snap;
      }
    }
  };
  record(0);
  const Eigen::VectorXd no_forcing = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 1; k <= K; ++k) {
    Eigen::VectorXd forcing = no_forcing;
    if (noisy) {
      const Eigen::VectorXd db = wiener_mode_increments(config.noise, config.dt, rng);
      forcing = config.nu * (op.noise_projection.leftCols(db.size()) * db);
    }
    SolveReport step = step_implicit_euler(c, op, config.dt, forcing);
    traj.newton_iterations += step.iterations;
    if (!step.converged) {
      traj.failed = true;
      traj.message = "step " + std::to_string(k) + ": " + step.message;
      break;
    }
    c = std::move(step.coeffs);
    record(k);
  }
  return traj;
}

Trajectory evolve(const EvolutionConfig& config, const std::optional<GridFunction>& reference) {
  config.validate();
  const std::size_t J = config.intervals();
  const SpectralSpace space =
      std::abs(config.q - 2.0) < 1e-15 ? two_sine_space(config.N, J)
                                       : build_space(config.q, config.N, J, config.n_quad);
  const GridFunction g = benchmark_source(config.source, J);
  const bool noisy = config.nu > 0.0 && config.noise.kind != NoiseKind::none;
  const EvolutionOperator op =
      make_operator(config.p, space, g, config.pairing, noisy ? config.noise.M : 0);
  return evolve(config, op, reference, noisy ? realization_seed(config.seed, 0) : 0);
}

std::vector<double> error_vs_time(const Trajectory& traj, const GridFunction& reference) {
  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const GridFunction& u : traj.snapshots) out.push_back(l2_distance(u, reference));
  return out;
}

EnsembleResult ensemble(const EvolutionConfig& config, const EvolutionOperator& op,
                        std::size_t realizations) {
  if (realizations < 2) throw InvalidInput("ensemble needs at least two realizations");
  EnsembleResult out;
  const std::size_t J = op.sys.intervals();
  const GridFunction e1 = sine_mode(1, J);
  std::vector<GridFunction> sum, sumsq;
  for (std::size_t r = 0; r < realizations; ++r) {
    const Trajectory tr = evolve(config, op, std::nullopt, realization_seed(config.seed, r));
    if (tr.failed) {
      ++out.failures;
      continue;
    }
    if (sum.empty()) {
      out.times = tr.times;
      sum.assign(tr.snapshots.size(), GridFunction(J));
      sumsq.assign(tr.snapshots.size(), GridFunction(J));
      out.mode1.assign(tr.snapshots.size(), {});
    }
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
      const GridFunction& u = tr.snapshots[i];
      for (std::size_t j = 0; j <= J; ++j) {
        sum[i][j] += u[j];
        sumsq[i][j] += u[j] * u[j];
      }
      out.mode1[i].push_back(inner(u, e1));
    }
    ++out.realizations;
  }
  if (out.realizations < 2) throw Degeneracy("fewer than two realizations succeeded");
  const double R = static_cast<double>(out.realizations);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    GridFunction mean(J), se(J);
    for (std::size_t j = 0; j <= J; ++j) {
      mean[j] = sum[i][j] / R;
      const double var = std::max(0.0, (sumsq[i][j] - R * mean[j] * mean[j]) / (R - 1.0));
      se[j] = std::sqrt(var / R);
    }
    out.mean.push_back(std::move(mean));
    out.standard_error.push_back(std::move(se));
  }
  return out;
}

SolveReport steady_state(const EvolutionOperator& op, double dt, double tol,
                         std::size_t max_steps, const NewtonOptions& options) {
  const auto n = static_cast<Eigen::Index>(op.sys.N);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd c = zero;
  SolveReport out;
  for (std::size_t k = 0; k < max_steps; ++k) {
    SolveReport step = step_implicit_euler(c, op, dt, zero, options);
    out.iterations += step.iterations;
    if (!step.converged) {
      out.coeffs = c;
      out.message = step.message;
      return out;
    }
    const double change = (step.coeffs - c).cwiseAbs().maxCoeff();
    c = std::move(step.coeffs);
    if (change <= tol) {
      out.coeffs = c;
      out.converged = true;
      out.residual_norm = assemble_residual(c, op.sys).cwiseAbs().maxCoeff();
      out.eps_reg = op.sys.eps_reg;
      return out;
    }
  }
  out.coeffs = c;
  out.message = "steady state not reached";
  return out;
}

}  // namespace qsine
