#include "qsine/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace qsine {

std::string to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::primal_qsine: return "primal-qsine";
    case BasisTag::dual_qsine: return "dual-qsine";
    case BasisTag::two_sine: return "two-sine";
    case BasisTag::orthogonalized_primal: return "orthogonalized-primal";
    case BasisTag::orthogonalized_dual: return "orthogonalized-dual";
  }
  return "unknown";
}

SampledFamily primal_family(const SpectralSpace& space) {
  return {BasisTag::primal_qsine, space.q(), space.basis.f};
}

SampledFamily dual_family(const SpectralSpace& space) {
  return {BasisTag::dual_qsine, space.q(), space.dual.f};
}

SampledFamily two_sine_family(std::size_t modes, std::size_t intervals) {
  SampledFamily fam{BasisTag::two_sine, 2.0, {}};
  for (std::size_t k = 1; k <= modes; ++k) fam.functions.push_back(sine_mode(k, intervals));
  return fam;
}

Eigen::VectorXd sine_coeffs(const GridFunction& g, std::size_t modes) {
  const std::size_t J = g.intervals();
  if (modes == 0 || J < 10 * modes) {
    throw InvalidInput("sine_coeffs: grid does not resolve " + std::to_string(modes) + " modes");
  }
  const TrigTable trig(J);
  Eigen::VectorXd out(modes);
  std::vector<double> prod(J + 1);
  for (std::size_t k = 1; k <= modes; ++k) {
    for (std::size_t j = 0; j <= J; ++j) prod[j] = g[j] * trig.sin(k, j);
    out(k - 1) = std::numbers::sqrt2 * simpson(prod, g.h());
  }
  return out;
}

Expansion expand_primal(const GridFunction& g, const SchauderMatrix& S, const DualBasis& dual) {
  if (dual.modes != S.modes) throw InvalidInput("expand_primal: mode count mismatch");
  const Eigen::VectorXd ghat = sine_coeffs(g, S.modes);
  return {BasisTag::primal_qsine, S.q, S.modes, S.T_inv * ghat};
}

Expansion expand_primal_quadrature(const GridFunction& g, const DualBasis& dual) {
  Eigen::VectorXd a(dual.modes);
  for (std::size_t n = 0; n < dual.modes; ++n) a(n) = inner(g, dual.f[n]);
  return {BasisTag::primal_qsine, dual.q, dual.modes, a};
}

Expansion expand_dual(const GridFunction& g, const QSineBasis& basis, const DualBasis& dual) {
  if (basis.modes != dual.modes) throw InvalidInput("expand_dual: mode count mismatch");
  Eigen::VectorXd b(basis.modes);
  for (std::size_t n = 0; n < basis.modes; ++n) b(n) = inner(g, basis.f[n]);
  return {BasisTag::dual_qsine, basis.q.value(), basis.modes, b};
}

Expansion expand_orthonormal(const GridFunction& g, const SampledFamily& orthonormal) {
  Eigen::VectorXd c(orthonormal.size());
  for (std::size_t n = 0; n < orthonormal.size(); ++n) c(n) = inner(g, orthonormal.functions[n]);
  return {orthonormal.tag, orthonormal.q, orthonormal.size(), c};
}

GridFunction reconstruct(const Expansion& e, const SampledFamily& family) {
  if (e.tag != family.tag) {
    throw InvalidInput("reconstruct: expansion tag " + to_string(e.tag) +
                       " does not match family " + to_string(family.tag));
  }
  if (static_cast<std::size_t>(e.coeffs.size()) > family.size() || family.size() == 0) {
    throw InvalidInput("reconstruct: family has fewer functions than coefficients");
  }
  GridFunction out(family.functions.front().intervals());
  for (Eigen::Index n = 0; n < e.coeffs.size(); ++n) {
    const double c = e.coeffs(n);
    if (c == 0.0) continue;
    const GridFunction& f = family.functions[static_cast<std::size_t>(n)];
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * f[j];
  }
  return out;
}

double residual(const GridFunction& g, const Expansion& e, const SampledFamily& family) {
  return l2_norm(g - reconstruct(e, family));
}

SampledFamily gram_schmidt(const SampledFamily& family, double rank_tol) {
  BasisTag tag = family.tag;
  if (tag == BasisTag::primal_qsine) tag = BasisTag::orthogonalized_primal;
  if (tag == BasisTag::dual_qsine) tag = BasisTag::orthogonalized_dual;
  SampledFamily out{tag, family.q, {}};
  out.functions.reserve(family.size());
  for (std::size_t n = 0; n < family.size(); ++n) {
    GridFunction v = family.functions[n];
    const double original = l2_norm(v);
    // Two passes of modified Gram-Schmidt keep the result orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (const GridFunction& u : out.functions) {
        const double c = inner(v, u);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * u[j];
      }
    }
    const double norm = l2_norm(v);
    if (!(original > 0.0) || norm <= rank_tol * original) {
      throw Degeneracy("gram_schmidt: input " + std::to_string(n + 1) +
                       " is numerically dependent on its predecessors");
    }
    v *= 1.0 / norm;
    out.functions.push_back(std::move(v));
  }
  return out;
}

std::vector<double> random_hs_coeffs(double s, std::size_t n_modes, double delta,
                                     std::uint64_t seed) {
  if (n_modes == 0) throw InvalidInput("random_hs: n_modes >= 1");
  if (!(delta > 0.0)) throw InvalidInput("random_hs: delta > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(n_modes);
  for (std::size_t j = 1; j <= n_modes; ++j) {
    const double jj = static_cast<double>(j);
    const double a = std::pow(1.0 + jj * jj, -0.5 * s) * std::pow(jj, -0.5 - delta);
    c[j - 1] = a * normal(rng);
  }
  return c;
}

GridFunction random_hs(double s, std::size_t n_modes, double delta, std::uint64_t seed,
                       std::size_t intervals) {
  const std::vector<double> c = random_hs_coeffs(s, n_modes, delta, seed);
  const TrigTable trig(intervals);
  GridFunction g(intervals);
  for (std::size_t k = 1; k <= n_modes; ++k) {
    const double a = std::numbers::sqrt2 * c[k - 1];
    for (std::size_t j = 0; j <= intervals; ++j) g[j] += a * trig.sin(k, j);
  }
  g[0] = 0.0;
  g[intervals] = 0.0;
  return g;
}

double g_c_printed(double x) {
  if (x <= 3.0 / 7.0) return 7.0 / 3.0 * x;
  if (x <= 0.5) return -21.0 / 4.0 * x + 13.0 / 4.0;
  if (x <= 4.0 / 7.0) return 21.0 / 4.0 * x - 2.0;
  return -x + 11.0 / 7.0;
}

double g_c(double x) {
  // Mirror image of the left half so that g_c(1) = 0.
  return x <= 0.5 ? g_c_printed(x) : g_c_printed(1.0 - x);
}

GridFunction benchmark_source(const std::string& requested, std::size_t intervals, double k,
                              std::size_t n_quad) {
  std::string name = requested;
  if (name.size() == 2 && name[0] == 'g') name = name.substr(1);  // "gb" -> "b"
  if (name == "g1" || name == "1") name = "one";
  if (name == "gc-printed") name = "c-printed";
  if (name == "a") {
    const SpectralSpace space = build_space(10.0, 10, intervals, n_quad);
    return space.basis.f[0] + 2.5 * space.basis.f[9];
  }
  if (name == "b") {
    return GridFunction::sample(intervals,
                                [](double x) { return (x >= 0.25 && x <= 0.75) ? 1.0 : 0.0; });
  }
  if (name == "c") return GridFunction::sample(intervals, g_c);
  if (name == "c-printed") return GridFunction::sample(intervals, g_c_printed);
  if (name == "d") {
    const double q = 3.0;
    auto [f1, df1] = build_f1(q, n_quad, intervals);
    const double scale = (q - 1.0) * std::pow(k * pi_q(q), q);
    GridFunction g(intervals);
    for (std::size_t j = 0; j <= intervals; ++j) {
      g[j] = scale * f1[j] * std::pow(std::abs(f1[j]), q - 2.0);
    }
    return g;
  }
  if (name == "sin") {
    return GridFunction::sample(intervals, [](double x) { return std::sin(std::numbers::pi * x); });
  }
  if (name == "one") {
    return GridFunction::sample(intervals, [](double) { return 1.0; });
  }
  throw InvalidInput("unknown benchmark source '" + name + "'");
}

ExpansionMode parse_expansion_mode(const std::string& name) {
  if (name == "primal") return ExpansionMode::primal;
  if (name == "dual") return ExpansionMode::dual;
  if (name == "orth-primal") return ExpansionMode::orthogonalized_primal;
  if (name == "orth-dual") return ExpansionMode::orthogonalized_dual;
  throw InvalidInput("unknown expansion mode '" + name + "'");
}

std::size_t argmin_first(const std::vector<double>& values) {
  if (values.empty()) throw InvalidInput("argmin of an empty sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

std::vector<double> default_q_grid() {
  std::vector<double> grid;
  for (int i = 21; i <= 200; ++i) grid.push_back(i / 20.0);
  for (int q = 11; q <= 100; ++q) grid.push_back(static_cast<double>(q));
  return grid;
}

ResidualPoint residuals_at(const GridFunction& g, const SpectralSpace& space,
                           bool orthogonalized) {
  const SampledFamily primal = primal_family(space);
  const SampledFamily dual = dual_family(space);
  ResidualPoint pt{space.q(), 0.0, 0.0, std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
  pt.primal = residual(g, expand_primal(g, space.schauder, space.dual), primal);
  pt.dual = residual(g, expand_dual(g, space.basis, space.dual), dual);
  if (orthogonalized) {
    const SampledFamily op = gram_schmidt(primal);
    const SampledFamily od = gram_schmidt(dual);
    pt.orthogonalized_primal = residual(g, expand_orthonormal(g, op), op);
    pt.orthogonalized_dual = residual(g, expand_orthonormal(g, od), od);
  }
  return pt;
}

namespace {

double mode_residual(const GridFunction& g, const SpectralSpace& space, ExpansionMode mode) {
  switch (mode) {
    case ExpansionMode::primal:
      return residual(g, expand_primal(g, space.schauder, space.dual), primal_family(space));
    case ExpansionMode::dual:
      return residual(g, expand_dual(g, space.basis, space.dual), dual_family(space));
    case ExpansionMode::orthogonalized_primal: {
      const SampledFamily op = gram_schmidt(primal_family(space));
      return residual(g, expand_orthonormal(g, op), op);
    }
    case ExpansionMode::orthogonalized_dual: {
      const SampledFamily od = gram_schmidt(dual_family(space));
      return residual(g, expand_orthonormal(g, od), od);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SweepResult qopt_sweep(const GridFunction& g, std::size_t modes, const std::vector<double>& q_grid,
                       ExpansionMode mode, std::size_t n_quad) {
  SweepResult out;
  for (double q : q_grid) {
    if (q < 1.05 - 1e-12 || q > 100.0 + 1e-12) {
      out.failures.emplace_back(q, "q outside [1.05, 100]");
      continue;
    }
    try {
      const SpectralSpace space = build_space(q, modes, g.intervals(), n_quad);
      const double r = mode_residual(g, space, mode);
      if (!std::isfinite(r)) throw Degeneracy("non-finite residual");
      out.q_grid.push_back(q);
      out.residuals.push_back(r);
    } catch (const std::exception& e) {
      out.failures.emplace_back(q, e.what());
    }
  }
  if (out.residuals.empty()) throw Degeneracy("qopt_sweep: every q point failed");
  out.q_opt = out.q_grid[argmin_first(out.residuals)];
  return out;
}

RateFit rate_in_N(const SourceFn& g, double q, const std::vector<std::size_t>& modes,
                  std::size_t n_quad) {
  RateFit fit;
  for (std::size_t N : modes) {
    const std::size_t J = resolution_intervals(N);
    const GridFunction gJ = g(J);
    const SpectralSpace space = build_space(q, N, J, n_quad);
    fit.modes.push_back(static_cast<double>(N));
    fit.residuals.push_back(
        residual(gJ, expand_primal(gJ, space.schauder, space.dual), primal_family(space)));
  }
  // Residuals at rounding level (an exactly representable source) carry no rate.
  const bool exact = std::any_of(fit.residuals.begin(), fit.residuals.end(),
                                 [](double r) { return !(r > 1e-12); });
  fit.slope = exact ? std::numeric_limits<double>::quiet_NaN()
                    : loglog_slope(fit.modes, fit.residuals);
  return fit;
}

}  // namespace qsine
