#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace qsine {

struct SolveReport {
  Eigen::VectorXd coeffs;
  double residual_norm = 0.0;  // ||F||_inf at coeffs
  std::size_t iterations = 0;
  bool converged = false;
  double eps_reg = 0.0;
  std::size_t dogleg_steps = 0;
  std::string message;
};

struct NewtonOptions {
  double tol = 1e-10;
  std::size_t max_iter = 50;
  std::size_t max_backtracks = 12;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Damped Newton with backtracking on ||F||_2 and a Powell dogleg fallback
/// when no damped step decreases the residual. Stops on ||F||_inf <= tol.
/// A numerically singular Jacobian is shifted once by a small multiple of its
/// norm before the step is declared a failure.
SolveReport solve_nonlinear(const ResidualFn& residual, const JacobianFn& jacobian,
                            Eigen::VectorXd x0, const NewtonOptions& options = {});

}  // namespace qsine
