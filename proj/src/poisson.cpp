#include "qsine/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsine {

PPoissonProblem::PPoissonProblem(double p_, GridFunction g_) : p(p_), g(std::move(g_)) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("p-Poisson needs p > 1");
}

GridFunction volterra(const GridFunction& g) { return cumulative_simpson(g); }

double signed_power(double z, double r) {
  if (z == 0.0) return 0.0;
  const double m = std::pow(std::abs(z), r);
  return z > 0.0 ? m : -m;
}

double h_of_gamma(const GridFunction& Vg, double gamma, double r) {
  std::vector<double> w(Vg.size());
  for (std::size_t j = 0; j < Vg.size(); ++j) w[j] = signed_power(Vg[j] - gamma, r);
  return simpson(w, Vg.h());
}

namespace {

bool is_zero(const GridFunction& g) {
  return std::all_of(g.values().begin(), g.values().end(), [](double v) { return v == 0.0; });
}

// Differences Vg - gamma at the rounding level of Vg are treated as zero. For
// small r the power |z|^r maps a rounding-sized z to an O(1) slope.
double rounding_floor(const GridFunction& Vg) {
  return 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, sup_norm(Vg));
}

GridFunction slope_samples(const GridFunction& Vg, double gamma, double r) {
  const double floor = rounding_floor(Vg);
  GridFunction w(Vg.intervals());
  for (std::size_t j = 0; j < Vg.size(); ++j) {
    const double z = Vg[j] - gamma;
    w[j] = std::abs(z) <= floor ? 0.0 : signed_power(z, r);
  }
  return w;
}

double root_of_h(const GridFunction& Vg, double r) {
  const auto [mn, mx] = std::minmax_element(Vg.values().begin(), Vg.values().end());
  double lo = *mn - 1e-14 * (1.0 + std::abs(*mn));
  double hi = *mx + 1e-14 * (1.0 + std::abs(*mx));
  auto h = [&](double gamma) { return simpson(slope_samples(Vg, gamma, r)); };
  const double hlo = h(lo), hhi = h(hi);
  if (!(hlo >= 0.0 && hhi <= 0.0)) {
    // Numerically flat Vg: both ends agree up to rounding.
    return std::abs(hlo) <= std::abs(hhi) ? lo : hi;
  }
  // Bisect down to adjacent doubles; a 1e-12 error in gamma would already
  // move the slope by 1e-12^r near the sign change.
  return bisect(h, lo, hi, std::numeric_limits<double>::denorm_min());
}

}  // namespace

double gamma0(const PPoissonProblem& problem) {
  if (is_zero(problem.g)) return 0.0;
  return root_of_h(volterra(problem.g), problem.r());
}

ExactSolution exact_solution(const PPoissonProblem& problem) {
  const std::size_t J = problem.g.intervals();
  if (is_zero(problem.g)) return {GridFunction(J), 0.0};
  const GridFunction Vg = volterra(problem.g);
  const double r = problem.r();
  const double g0 = root_of_h(Vg, r);
  GridFunction u = cumulative_simpson(slope_samples(Vg, g0, r));
  const double defect = u[J];
  for (std::size_t j = 0; j <= J; ++j) u[j] -= u.x(j) * defect;
  u[J] = 0.0;
  return {std::move(u), g0, defect};
}

double stability_bound(const GridFunction& g, const GridFunction& g_tilde, double p) {
  if (!(p > 1.0)) throw InvalidInput("stability_bound needs p > 1");
  const std::size_t J = std::max(g.intervals(), g_tilde.intervals());
  const GridFunction a = resample(g, J), b = resample(g_tilde, J);
  const GridFunction diff = a - b;
  const double d2 = l2_norm(diff), d1 = l1_norm(diff);
  const double m = std::max(l1_norm(a), l1_norm(b));
  const double r = 1.0 / (p - 1.0);
  if (r <= 1.0) {
    return std::pow(2.0, 1.0 - r) *
           std::pow(d2 + std::pow(4.0 * m, 1.0 - r) / r * std::pow(d1, r), r);
  }
  return r * std::pow(2.0, r - 1.0) * std::pow(m, r - 1.0) *
         (d2 + std::pow(2.0, 2.0 - 2.0 / r) * std::pow(m, 1.0 - 1.0 / r) * std::pow(r, 1.0 / r) *
                   std::pow(d1, 1.0 / r));
}

std::pair<double, double> lemma_cases_gap(const GridFunction& g, double gamma, double mu,
                                          double r) {
  if (!(r > 0.0)) throw InvalidInput("lemma_cases_gap needs r > 0");
  const double n1 = l1_norm(g);
  const double slack = 1e-12 * (1.0 + n1);
  if (!(gamma <= mu) || gamma < -n1 - slack || mu > n1 + slack) {
    throw InvalidInput("lemma_cases_gap needs -||g||_1 <= gamma <= mu <= ||g||_1");
  }
  const GridFunction Vg = volterra(g);
  const double dh = h_of_gamma(Vg, gamma, r) - h_of_gamma(Vg, mu, r);
  if (r <= 1.0) {
    return {mu - gamma, std::pow(2.0 * n1, 1.0 - r) / r * dh};
  }
  return {std::pow(mu - gamma, r), std::pow(2.0, r - 1.0) * dh};
}

}  // namespace qsine
