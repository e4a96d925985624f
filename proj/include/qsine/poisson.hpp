#pragma once

// Closed-form integration of the one-dimensional p-Poisson problem
//   (|u'|^(p-2) u')' = g,  u(0) = u(1) = 0,
// through the Volterra operator: u = V([[Vg - gamma0]]^r), r = 1/(p-1),
// with gamma0 the root of h_g(gamma) = int [[Vg - gamma]]^r.

#include <utility>

#include "qsine/numerics.hpp"

namespace qsine {

struct PPoissonProblem {
  double p;
  GridFunction g;

  PPoissonProblem(double p, GridFunction g);
  double r() const { return 1.0 / (p - 1.0); }
};

struct ExactSolution {
  GridFunction u;
  double gamma0 = 0.0;
  /// Raw quadrature value of u(1) before the linear closure u - x u(1).
  double closure_defect = 0.0;
};

/// Vg(x) = int_0^x g.
GridFunction volterra(const GridFunction& g);

/// sign(z) |z|^r.
double signed_power(double z, double r);

/// h_g(gamma) by Simpson quadrature, given Vg.
double h_of_gamma(const GridFunction& Vg, double gamma, double r);

/// Root of h_g on [min Vg, max Vg], bisected down to adjacent doubles.
double gamma0(const PPoissonProblem& problem);

/// u on the grid of g. Slopes |Vg - gamma0|^r at nodes within rounding of the
/// sign change are set to zero. The closure u(1) = 0 is imposed by subtracting
/// x u(1); the removed value is reported and is at rounding level in practice.
ExactSolution exact_solution(const PPoissonProblem& problem);

/// Upper bound on ||u - u~|| in terms of the source perturbation (two regimes in r).
double stability_bound(const GridFunction& g, const GridFunction& g_tilde, double p);

/// Both sides (lhs <= rhs) of the Hoelder-type estimates on h_g, for
/// -||g||_1 <= gamma <= mu <= ||g||_1.
std::pair<double, double> lemma_cases_gap(const GridFunction& g, double gamma, double mu, double r);

}  // namespace qsine
