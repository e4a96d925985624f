#include "qsine/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsine {

namespace {

struct StepSolve {
  Eigen::VectorXd step;
  bool ok = false;
};

StepSolve newton_direction(const Eigen::MatrixXd& J, const Eigen::VectorXd& f) {
  const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXd A = J;
    if (attempt == 1) A.diagonal().array() += 1e-10 * scale;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 1e-15)) continue;
    Eigen::VectorXd s = -lu.solve(f);
    if (s.allFinite()) return {std::move(s), true};
  }
  return {Eigen::VectorXd::Zero(f.size()), false};
}

// Powell dogleg point inside a trust region of radius delta.
Eigen::VectorXd dogleg(const Eigen::MatrixXd& J, const Eigen::VectorXd& f,
                       const Eigen::VectorXd& newton, bool have_newton, double delta) {
  if (have_newton && newton.norm() <= delta) return newton;
  const Eigen::VectorXd grad = J.transpose() * f;
  const double gnorm = grad.norm();
  if (gnorm == 0.0) return Eigen::VectorXd::Zero(f.size());
  const double jg = (J * grad).squaredNorm();
  const double t = jg > 0.0 ? gnorm * gnorm / jg : delta / gnorm;
  const Eigen::VectorXd cauchy = -t * grad;
  if (!have_newton || cauchy.norm() >= delta) return -(delta / gnorm) * grad;
  // Intersect the segment cauchy -> newton with the trust-region boundary.
  const Eigen::VectorXd d = newton - cauchy;
  const double a = d.squaredNorm();
  const double b = 2.0 * cauchy.dot(d);
  const double c = cauchy.squaredNorm() - delta * delta;
  const double tau = (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
  return cauchy + tau * d;
}

}  // namespace

SolveReport solve_nonlinear(const ResidualFn& residual, const JacobianFn& jacobian,
                            Eigen::VectorXd x0, const NewtonOptions& options) {
  SolveReport report;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd f = residual(x);
  double fnorm2 = f.norm();
  double delta = std::max(1.0, x.norm());
  for (;;) {
    report.residual_norm = f.cwiseAbs().maxCoeff();
    if (!std::isfinite(report.residual_norm)) {
      report.message = "non-finite residual";
      break;
    }
    if (report.residual_norm <= options.tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iter) {
      report.message = "iteration limit reached";
      break;
    }
    ++report.iterations;
    const Eigen::MatrixXd J = jacobian(x);
    const StepSolve newton = newton_direction(J, f);

    bool accepted = false;
    if (newton.ok) {
      double alpha = 1.0;
      for (std::size_t k = 0; k <= options.max_backtracks; ++k, alpha *= 0.5) {
        Eigen::VectorXd trial = x + alpha * newton.step;
        Eigen::VectorXd ft = residual(trial);
        const double tn = ft.norm();
        if (std::isfinite(tn) && tn < fnorm2) {
          x = std::move(trial);
          f = std::move(ft);
          fnorm2 = tn;
          accepted = true;
          delta = std::max(delta, alpha * newton.step.norm());
          break;
        }
      }
    }
    if (!accepted) {
      // Dogleg fallback with a shrinking trust region.
      for (int k = 0; k < 30 && !accepted; ++k, delta *= 0.25) {
        Eigen::VectorXd s = dogleg(J, f, newton.step, newton.ok, delta);
        if (s.norm() == 0.0) break;
        Eigen::VectorXd trial = x + s;
        Eigen::VectorXd ft = residual(trial);
        const double tn = ft.norm();
        if (std::isfinite(tn) && tn < fnorm2) {
          x = std::move(trial);
          f = std::move(ft);
          fnorm2 = tn;
          accepted = true;
          ++report.dogleg_steps;
        }
      }
    }
    if (!accepted) {
      report.residual_norm = f.cwiseAbs().maxCoeff();
      report.converged = report.residual_norm <= options.tol;
      report.message = newton.ok ? "no descent step found" : "singular Jacobian";
      break;
    }
  }
  report.coeffs = std::move(x);
  return report;
}

}  // namespace qsine
