#include "qsine/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsine/approx.hpp"
#include "qsine/poisson.hpp"

namespace qsine {

namespace {

RowMatrix stack(const std::vector<GridFunction>& fs) {
  if (fs.empty()) throw InvalidInput("empty basis family");
  const std::size_t n = fs.front().size();
  RowMatrix m(fs.size(), n);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].size() != n) throw InvalidInput("basis functions on different grids");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = fs[i][j];
  }
  return m;
}

Eigen::VectorXd as_vector(const GridFunction& g) {
  return Eigen::Map<const Eigen::VectorXd>(g.values().data(), static_cast<Eigen::Index>(g.size()));
}

void check_coeffs(const Eigen::VectorXd& c, const GalerkinSystem& sys) {
  if (static_cast<std::size_t>(c.size()) != sys.N) {
    throw InvalidInput("coefficient vector length does not match the system");
  }
}

Eigen::VectorXd sample_derivative(const Eigen::VectorXd& c, const GalerkinSystem& sys) {
  return sys.trial_df.transpose() * c;
}

// A(lambda c) = |lambda|^{p-2} lambda A(c) up to the regularization, so the
// best multiple of a start along itself is available in closed form.
Eigen::VectorXd rescale_start(const Eigen::VectorXd& c, const GalerkinSystem& sys, double p);

}  // namespace

Pairing parse_pairing(const std::string& name) {
  if (name == "primal") return Pairing::primal;
  if (name == "dual") return Pairing::dual;
  if (name == "petrov") return Pairing::petrov;
  throw InvalidInput("unknown pairing '" + name + "' (expected primal, dual or petrov)");
}

std::string to_string(Pairing pairing) {
  switch (pairing) {
    case Pairing::primal: return "primal";
    case Pairing::dual: return "dual";
    case Pairing::petrov: return "petrov";
  }
  return "?";
}

GalerkinSystem make_system(double p, const SpectralSpace& space, const GridFunction& g,
                           Pairing pairing) {
  if (!(p > 1.0)) throw InvalidInput("p must exceed 1");
  if (g.intervals() != space.intervals()) {
    throw InvalidInput("source and basis must share a grid");
  }
  GalerkinSystem sys;
  sys.p = p;
  sys.q = space.q();
  sys.pairing = pairing;
  sys.N = space.modes();
  sys.h = g.h();
  const bool trial_dual = pairing == Pairing::dual;
  const bool test_dual = pairing != Pairing::primal;
  sys.trial_f = stack(trial_dual ? space.dual.f : space.basis.f);
  sys.trial_df = stack(trial_dual ? space.dual.df : space.basis.df);
  sys.test_f = stack(test_dual ? space.dual.f : space.basis.f);
  sys.test_df = stack(test_dual ? space.dual.df : space.basis.df);
  const std::vector<double> w = simpson_weights(g.size(), g.h());
  sys.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  sys.rhs = -(sys.test_f * sys.weights.cwiseProduct(as_vector(g)));
  return sys;
}

Eigen::VectorXd stiffness_action(const Eigen::VectorXd& c, const GalerkinSystem& sys,
                                 double p) {
  check_coeffs(c, sys);
  const Eigen::VectorXd du = sample_derivative(c, sys);
  const double e2 = sys.eps_reg * sys.eps_reg;
  Eigen::VectorXd flux(du.size());
  if (p == 2.0) {
    flux = du;
  } else {
    for (Eigen::Index i = 0; i < du.size(); ++i) {
      flux[i] = std::pow(du[i] * du[i] + e2, 0.5 * (p - 2.0)) * du[i];
    }
  }
  return sys.test_df * sys.weights.cwiseProduct(flux);
}

Eigen::MatrixXd stiffness_jacobian(const Eigen::VectorXd& c, const GalerkinSystem& sys,
                                   double p) {
  check_coeffs(c, sys);
  const Eigen::VectorXd du = sample_derivative(c, sys);
  const double e2 = sys.eps_reg * sys.eps_reg;
  Eigen::VectorXd k(du.size());
  for (Eigen::Index i = 0; i < du.size(); ++i) {
    if (p == 2.0) {
      k[i] = sys.weights[i];
    } else {
      const double s = du[i] * du[i] + e2;
      k[i] = sys.weights[i] * ((p - 1.0) * du[i] * du[i] + e2) * std::pow(s, 0.5 * (p - 4.0));
    }
  }
  Eigen::MatrixXd J = sys.test_df * k.asDiagonal() * sys.trial_df.transpose();
  if (sys.bandwidth > 0) {
    const auto b = static_cast<Eigen::Index>(sys.bandwidth);
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
      for (Eigen::Index j = 0; j < J.cols(); ++j) {
        if (std::abs(i - j) > b) J(i, j) = 0.0;
      }
    }
  }
  return J;
}

Eigen::VectorXd assemble_residual(const Eigen::VectorXd& c, const GalerkinSystem& sys) {
  return stiffness_action(c, sys, sys.p) - sys.rhs;
}

Eigen::MatrixXd assemble_jacobian(const Eigen::VectorXd& c, const GalerkinSystem& sys) {
  return stiffness_jacobian(c, sys, sys.p);
}

Eigen::MatrixXd mass_matrix(const GalerkinSystem& sys) {
  return sys.test_f * sys.weights.asDiagonal() * sys.trial_f.transpose();
}

Eigen::VectorXd linear_solve(const GalerkinSystem& sys) {
  GalerkinSystem linear = sys;
  linear.bandwidth = 0;
  const Eigen::MatrixXd K = stiffness_jacobian(Eigen::VectorXd::Zero(sys.N), linear, 2.0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  if (!(lu.rcond() > 1e-15)) throw Degeneracy("singular p = 2 stiffness matrix");
  return lu.solve(sys.rhs);
}

double regularization_for(const Eigen::VectorXd& c, const GalerkinSystem& sys) {
  check_coeffs(c, sys);
  return 1e-8 * (1.0 + sample_derivative(c, sys).cwiseAbs().maxCoeff());
}

GridFunction reconstruct(const Eigen::VectorXd& c, const GalerkinSystem& sys) {
  check_coeffs(c, sys);
  const Eigen::VectorXd u = sys.trial_f.transpose() * c;
  return GridFunction(std::vector<double>(u.data(), u.data() + u.size()));
}

SolveReport solve_ppoisson_from(const GalerkinSystem& sys, const Eigen::VectorXd& c0,
                                const NewtonOptions& options) {
  check_coeffs(c0, sys);
  auto F = [&sys](const Eigen::VectorXd& c) -> Eigen::VectorXd { return assemble_residual(c, sys); };
  auto J = [&sys](const Eigen::VectorXd& c) -> Eigen::MatrixXd { return assemble_jacobian(c, sys); };
  SolveReport report = solve_nonlinear(F, J, c0, options);
  report.eps_reg = sys.eps_reg;
  return report;
}

namespace {

Eigen::VectorXd rescale_start(const Eigen::VectorXd& c, const GalerkinSystem& sys, double p) {
  const Eigen::VectorXd a = stiffness_action(c, sys, p);
  const double aa = a.squaredNorm();
  const double ar = a.dot(sys.rhs);
  if (!(aa > 0.0) || !(ar > 0.0)) return c;
  const double lambda = std::pow(ar / aa, 1.0 / (p - 1.0));
  return std::isfinite(lambda) ? Eigen::VectorXd(lambda * c) : c;
}

}  // namespace

SolveReport solve_ppoisson(GalerkinSystem& sys, const NewtonOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidInput("tolerance must be positive");
  Eigen::VectorXd c = linear_solve(sys);
  sys.eps_reg = regularization_for(c, sys);
  std::size_t spent = 0;
  std::size_t doglegs = 0;
  if (std::abs(sys.p - 2.0) > 2.0) {
    constexpr int stages = 4;
    for (int k = 1; k < stages; ++k) {
      const double pk = 2.0 * std::pow(sys.p / 2.0, static_cast<double>(k) / stages);
      auto F = [&sys, pk](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return stiffness_action(v, sys, pk) - sys.rhs;
      };
      auto J = [&sys, pk](const Eigen::VectorXd& v) -> Eigen::MatrixXd { return stiffness_jacobian(v, sys, pk); };
      SolveReport stage = solve_nonlinear(F, J, rescale_start(c, sys, pk), options);
      spent += stage.iterations;
      doglegs += stage.dogleg_steps;
      if (stage.coeffs.allFinite()) c = stage.coeffs;
    }
  }
  SolveReport report = solve_ppoisson_from(sys, rescale_start(c, sys, sys.p), options);
  report.iterations += spent;
  report.dogleg_steps += doglegs;
  return report;
}

ReferenceSolution reference_solution(double p, const GridFunction& g, std::size_t N,
                                     const NewtonOptions& options) {
  const SpectralSpace space = two_sine_space(2 * N, g.intervals());
  GalerkinSystem sys = make_system(p, space, g, Pairing::primal);
  ReferenceSolution out;
  out.report = solve_ppoisson(sys, options);
  out.galerkin = reconstruct(out.report.coeffs, sys);
  out.exact = exact_solution({p, g}).u;
  out.l2_gap = l2_distance(out.galerkin, out.exact);
  return out;
}

SolverSweepResult solver_qopt_sweep(double p, const GridFunction& g, std::size_t N,
                                    const std::vector<double>& q_grid, Pairing pairing,
                                    const NewtonOptions& options, std::size_t n_quad) {
  return solver_qopt_sweep_against(p, g, N, q_grid, exact_solution({p, g}).u, pairing, options,
                                   n_quad);
}

SolverSweepResult solver_qopt_sweep_against(double p, const GridFunction& g, std::size_t N,
                                            const std::vector<double>& q_grid,
                                            const GridFunction& exact, Pairing pairing,
                                            const NewtonOptions& options, std::size_t n_quad) {
  if (q_grid.empty()) throw InvalidInput("empty q grid");
  if (exact.intervals() != g.intervals()) throw InvalidInput("reference must share the grid of g");
  SolverSweepResult out;
  out.p = p;
  out.N = N;
  std::vector<double> scores;
  for (double q : q_grid) {
    try {
      const SpectralSpace space = build_space(q, N, g.intervals(), n_quad);
      GalerkinSystem sys = make_system(p, space, g, pairing);
      const SolveReport report = solve_ppoisson(sys, options);
      SolverSweepPoint pt;
      pt.q = q;
      pt.iterations = report.iterations;
      pt.converged = report.converged;
      pt.l2_error = report.coeffs.allFinite()
                        ? l2_distance(reconstruct(report.coeffs, sys), exact)
                        : std::numeric_limits<double>::quiet_NaN();
      if (!report.converged) out.failures.emplace_back(q, report.message);
      out.points.push_back(pt);
      scores.push_back(pt.converged && std::isfinite(pt.l2_error)
                           ? pt.l2_error
                           : std::numeric_limits<double>::infinity());
    } catch (const std::exception& e) {
      out.failures.emplace_back(q, e.what());
    }
  }
  if (scores.empty()) throw Degeneracy("every q in the sweep failed");
  out.q_opt = out.points[argmin_first(scores)].q;
  return out;
}

std::vector<std::size_t> local_minima(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) out.push_back(i);
  }
  return out;
}

}  // namespace qsine
