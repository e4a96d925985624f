#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsine/galerkin.hpp"

namespace qsine {

enum class NoiseKind { none, white, sobolev };

NoiseKind parse_noise_kind(const std::string& name);
std::string to_string(NoiseKind kind);

/// Q-Wiener process W = sum_m alpha_m^{1/2} beta_m(t) e_m(x), m = 1..M.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double s = 1.0;       // sobolev exponent
  double delta = 0.01;  // extra decay, as in random_hs
  std::size_t M = 0;

  /// sqrt(alpha_m) for m = 1..M.
  Eigen::VectorXd sqrt_alpha() const;
};

using Rng = std::mt19937_64;

/// Independent stream seed for realization r of a run seeded with base.
std::uint64_t realization_seed(std::uint64_t base, std::uint64_t r);

/// Delta beta_m ~ N(0, dt), m = 1..M, scaled by sqrt(alpha_m).
Eigen::VectorXd wiener_mode_increments(const NoiseSpec& noise, double dt, Rng& rng);

/// sum_m sqrt(alpha_m) e_m Delta beta_m on J intervals.
GridFunction wiener_increment(const NoiseSpec& noise, double dt, std::size_t intervals, Rng& rng);

/// Fixed per-problem operators for the time stepper.
struct EvolutionOperator {
  GalerkinSystem sys;
  Eigen::MatrixXd mass;        // identity for the petrov pairing
  bool identity_mass = true;
  Eigen::MatrixXd noise_projection;  // P_jm = <test_j, e_m>, N x M
};

/// eps_reg is fixed from the p = 2 solution so that steady states coincide
/// with solve_ppoisson on the same system.
EvolutionOperator make_operator(double p, const SpectralSpace& space, const GridFunction& g,
                                Pairing pairing, std::size_t noise_modes);

/// Solve M (c - c_n) + dt (A(c) + <g, test>) - forcing = 0 for c, warm-started
/// at c_n. On failure the step is retried once as two half steps (forcing split
/// evenly); a second failure is returned as a non-converged report.
SolveReport step_implicit_euler(const Eigen::VectorXd& c_n, const EvolutionOperator& op,
                                double dt, const Eigen::VectorXd& forcing,
                                const NewtonOptions& options = {});

struct EvolutionConfig {
  double p = 2.0;
  double q = 2.0;
  std::size_t N = 40;
  std::size_t J = 0;  // 0: resolution rule
  double dt = 0.01;
  double T = 1.0;
  double nu = 0.0;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  std::string source = "b";
  Pairing pairing = Pairing::petrov;
  std::vector<double> snapshot_times;  // empty: every step
  std::size_t n_quad = kDefaultQuadraturePoints;

  std::size_t intervals() const;
  std::size_t steps() const;
  void validate() const;
};

struct Trajectory {
  std::vector<double> step_times;                // t_0 = 0 .. t_K
  std::vector<Eigen::VectorXd> coeff_history;    // per step
  std::vector<double> error_series;              // per step, when a reference is given
  std::vector<double> times;                     // snapshot times
  std::vector<GridFunction> snapshots;
  std::size_t newton_iterations = 0;
  bool failed = false;
  std::string message;
};

/// Runs from u(x, 0) = 0 in a prebuilt operator. Snapshots are taken at the
/// first step time >= each requested time.
Trajectory evolve(const EvolutionConfig& config, const EvolutionOperator& op,
                  const std::optional<GridFunction>& reference = std::nullopt,
                  std::uint64_t stream_seed = 0);

/// Builds basis and operator from the config, then evolves with the config seed.
Trajectory evolve(const EvolutionConfig& config,
                  const std::optional<GridFunction>& reference = std::nullopt);

/// L2 distance of every snapshot to reference.
std::vector<double> error_vs_time(const Trajectory& traj, const GridFunction& reference);

GridFunction reconstruct(const Eigen::VectorXd& c, const EvolutionOperator& op);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<GridFunction> mean;
  std::vector<GridFunction> standard_error;  // pointwise sample sd / sqrt(R)
  std::vector<std::vector<double>> mode1;     // <u, e_1> per realization and snapshot
  std::size_t realizations = 0;
  std::size_t failures = 0;
};

/// R realizations with seeds realization_seed(config.seed, r).
EnsembleResult ensemble(const EvolutionConfig& config, const EvolutionOperator& op,
                        std::size_t realizations);

/// Iterates step_implicit_euler with nu = 0 until ||c^{n+1} - c^n||_inf <= tol.
SolveReport steady_state(const EvolutionOperator& op, double dt, double tol = 1e-12,
                         std::size_t max_steps = 100000, const NewtonOptions& options = {});

}  // namespace qsine
