#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsine/nonlinear.hpp"
#include "qsine/numerics.hpp"
#include "qsine/schauder.hpp"

namespace qsine {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Trial/test pairing. primal: u and v both in span{f_n}. dual: both in
/// span{f_n*}. petrov: u in span{f_n}, tested against f_n*.
enum class Pairing { primal, dual, petrov };

Pairing parse_pairing(const std::string& name);
std::string to_string(Pairing pairing);

/// Discrete weak form of (|u'|^{p-2} u')' = g with u(0) = u(1) = 0. Rows of the
/// sample matrices are basis functions, columns are grid nodes.
struct GalerkinSystem {
  double p = 2.0;
  double q = 2.0;
  Pairing pairing = Pairing::primal;
  std::size_t N = 0;
  double h = 0.0;
  RowMatrix trial_f, trial_df;
  RowMatrix test_f, test_df;
  Eigen::VectorXd weights;  // Simpson weights
  Eigen::VectorXd rhs;      // -<g, test_j>
  double eps_reg = 1e-8;
  std::size_t bandwidth = 0;  // 0: full Jacobian

  std::size_t intervals() const { return static_cast<std::size_t>(weights.size()) - 1; }
  bool symmetric_pairing() const { return pairing != Pairing::petrov; }
};

/// g must live on the grid of the space.
GalerkinSystem make_system(double p, const SpectralSpace& space, const GridFunction& g,
                           Pairing pairing = Pairing::primal);

/// A(c)_j = int w(u') u' test_j' with w = (u'^2 + eps^2)^{(p-2)/2}.
Eigen::VectorXd stiffness_action(const Eigen::VectorXd& c, const GalerkinSystem& sys,
                                 double p);
/// dA/dc, truncated to |j - k| <= bandwidth when bandwidth > 0.
Eigen::MatrixXd stiffness_jacobian(const Eigen::VectorXd& c, const GalerkinSystem& sys,
                                   double p);

/// F(c) = A(c) - rhs. Sign convention: the rhs carries -<g, test>, so that
/// u = sin(pi x) solves the p = 2 problem with g = -pi^2 sin(pi x).
Eigen::VectorXd assemble_residual(const Eigen::VectorXd& c, const GalerkinSystem& sys);
Eigen::MatrixXd assemble_jacobian(const Eigen::VectorXd& c, const GalerkinSystem& sys);

/// M_jk = <trial_k, test_j>.
Eigen::MatrixXd mass_matrix(const GalerkinSystem& sys);

/// Linear p = 2 solve in the same pairing.
Eigen::VectorXd linear_solve(const GalerkinSystem& sys);

/// eps = 1e-8 (1 + max|u'|) for coefficients c.
double regularization_for(const Eigen::VectorXd& c, const GalerkinSystem& sys);

GridFunction reconstruct(const Eigen::VectorXd& c, const GalerkinSystem& sys);

/// Starts from the p = 2 solution, continues geometrically in p (at most four
/// stages) when |p - 2| > 2, then runs Newton/dogleg at the target p. Fixes
/// sys.eps_reg from the p = 2 guess.
SolveReport solve_ppoisson(GalerkinSystem& sys, const NewtonOptions& options = {});

/// Newton/dogleg from a caller-supplied start, with the current eps_reg.
SolveReport solve_ppoisson_from(const GalerkinSystem& sys, const Eigen::VectorXd& c0,
                                const NewtonOptions& options = {});

struct ReferenceSolution {
  GridFunction galerkin;   // q = 2, 2N modes
  GridFunction exact;      // Volterra construction
  double l2_gap = 0.0;     // ||galerkin - exact||_2
  SolveReport report;
};

/// g must be sampled on a grid with intervals % (4N) == 0 and >= 20N.
ReferenceSolution reference_solution(double p, const GridFunction& g, std::size_t N,
                                     const NewtonOptions& options = {});

struct SolverSweepPoint {
  double q = 0.0;
  double l2_error = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SolverSweepResult {
  double p = 2.0;
  std::size_t N = 0;
  std::vector<SolverSweepPoint> points;
  double q_opt = 0.0;  // argmin over converged points, smallest q on ties
  std::vector<std::pair<double, std::string>> failures;
};

/// L2 error against the exact solution on the grid of g for every q.
SolverSweepResult solver_qopt_sweep(double p, const GridFunction& g, std::size_t N,
                                    const std::vector<double>& q_grid,
                                    Pairing pairing = Pairing::primal,
                                    const NewtonOptions& options = {},
                                    std::size_t n_quad = kDefaultQuadraturePoints);

/// As solver_qopt_sweep, but errors are measured against a supplied reference
/// (e.g. the q = 2, 2N-mode Galerkin solution) on the grid of g.
SolverSweepResult solver_qopt_sweep_against(double p, const GridFunction& g, std::size_t N,
                                            const std::vector<double>& q_grid,
                                            const GridFunction& reference,
                                            Pairing pairing = Pairing::primal,
                                            const NewtonOptions& options = {},
                                            std::size_t n_quad = kDefaultQuadraturePoints);

/// Local minima of a sampled curve (interior points strictly below both neighbours).
std::vector<std::size_t> local_minima(const std::vector<double>& values);

}  // namespace qsine
