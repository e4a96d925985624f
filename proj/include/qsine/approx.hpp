#pragma once

// Expansions of L^2 functions in the q-sine basis, its dual, and their
// orthogonalized versions; residual sweeps over q and convergence rates in N.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsine/numerics.hpp"
#include "qsine/schauder.hpp"

namespace qsine {

enum class BasisTag { primal_qsine, dual_qsine, two_sine, orthogonalized_primal, orthogonalized_dual };

std::string to_string(BasisTag tag);

/// A family of sampled functions tagged with the basis it came from.
struct SampledFamily {
  BasisTag tag = BasisTag::primal_qsine;
  double q = 2.0;
  std::vector<GridFunction> functions;

  std::size_t size() const { return functions.size(); }
};

SampledFamily primal_family(const SpectralSpace& space);
SampledFamily dual_family(const SpectralSpace& space);
SampledFamily two_sine_family(std::size_t modes, std::size_t intervals);

struct Expansion {
  BasisTag tag = BasisTag::primal_qsine;
  double q = 2.0;
  std::size_t modes = 0;
  Eigen::VectorXd coeffs;
};

/// g^(j) = <g, e_j>, j = 1..N.
Eigen::VectorXd sine_coeffs(const GridFunction& g, std::size_t modes);

/// a = T^{-1} g^  (coefficients a_n = <g, f_n*>), reconstructed with f_n.
Expansion expand_primal(const GridFunction& g, const SchauderMatrix& S, const DualBasis& dual);
/// a_n = <g, f_n*> by direct quadrature against the sampled dual functions.
Expansion expand_primal_quadrature(const GridFunction& g, const DualBasis& dual);
/// b_n = <g, f_n>, reconstructed with f_n*.
Expansion expand_dual(const GridFunction& g, const QSineBasis& basis, const DualBasis& dual);
/// Orthogonal projection onto span(family) through its Gram-Schmidt orthonormalization.
Expansion expand_orthonormal(const GridFunction& g, const SampledFamily& orthonormal);

GridFunction reconstruct(const Expansion& e, const SampledFamily& family);

/// ||g - reconstruct(e)||_2.
double residual(const GridFunction& g, const Expansion& e, const SampledFamily& family);

/// Modified Gram-Schmidt with respect to the Simpson inner product.
/// Throws Degeneracy when an input is numerically dependent on its predecessors.
SampledFamily gram_schmidt(const SampledFamily& family, double rank_tol = 1e-10);

/// Random function with coefficients (1+j^2)^(-s/2) j^(-1/2-delta) beta_j, beta_j ~ N(0,1).
GridFunction random_hs(double s, std::size_t n_modes, double delta, std::uint64_t seed,
                       std::size_t intervals);
/// Just the coefficients of random_hs (same stream, same values).
std::vector<double> random_hs_coeffs(double s, std::size_t n_modes, double delta,
                                     std::uint64_t seed);

/// Benchmark sources: "a" = f_1 + 2.5 f_10 at q = 10, "b" = indicator of
/// [1/4, 3/4], "c" = four-piece continuous piecewise linear (see g_c), "d" =
/// (q-1)(k pi_q)^q f_1 |f_1|^(q-2) at q = 3, "sin" = sin(pi x), "one" = 1.
/// The prefixed spellings "ga".."gd" and "g1" are accepted.
GridFunction benchmark_source(const std::string& name, std::size_t intervals,
                              double k = 1.0,
                              std::size_t n_quad = kDefaultQuadraturePoints);

/// Continuous piecewise-linear source with kinks at 3/7, 1/2, 4/7 and
/// g_c(0) = g_c(1) = 0: (7/3)x, -(21/4)x + 13/4, (21/4)x - 2, (7/3)(1 - x).
double g_c(double x);
/// Same breakpoints with last piece -x + 11/7 (so g(1) = 4/7); source "c-printed".
double g_c_printed(double x);

enum class ExpansionMode { primal, dual, orthogonalized_primal, orthogonalized_dual };

ExpansionMode parse_expansion_mode(const std::string& name);

/// Index of the minimum; the first (smallest q) on ties.
std::size_t argmin_first(const std::vector<double>& values);

struct SweepResult {
  std::vector<double> q_grid;
  std::vector<double> residuals;
  double q_opt = 0.0;
  std::vector<std::pair<double, std::string>> failures;
};

/// Default grid: 1.05..10 in steps of 0.05, then 11..100 in steps of 1.
std::vector<double> default_q_grid();

/// All four residuals at one q.
struct ResidualPoint {
  double q;
  double primal;
  double dual;
  double orthogonalized_primal;
  double orthogonalized_dual;
};

ResidualPoint residuals_at(const GridFunction& g, const SpectralSpace& space,
                           bool orthogonalized = true);

/// Residual of the requested expansion for every q on the grid of g; failing q
/// are recorded and skipped.
SweepResult qopt_sweep(const GridFunction& g, std::size_t modes, const std::vector<double>& q_grid,
                       ExpansionMode mode, std::size_t n_quad = kDefaultQuadraturePoints);

/// Source sampled on a requested grid.
using SourceFn = std::function<GridFunction(std::size_t intervals)>;

struct RateFit {
  std::vector<double> modes;
  std::vector<double> residuals;
  double slope = 0.0;
};

/// Primal residual for each N (on the resolution-rule grid of that N) and its
/// log-log slope; the slope is NaN when some residual is at rounding level.
RateFit rate_in_N(const SourceFn& g, double q, const std::vector<std::size_t>& modes,
                  std::size_t n_quad = kDefaultQuadraturePoints);

}  // namespace qsine
