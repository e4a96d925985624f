#include "qsine/schauder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qsine {

TauVector compute_tau(const GridFunction& f1, std::size_t j_max, double q) {
  const std::size_t J = f1.intervals();
  if (j_max == 0) throw InvalidInput("compute_tau: j_max must be positive");
  if (J < 10 * j_max) {
    throw InvalidInput("compute_tau: grid of " + std::to_string(J) +
                       " intervals does not resolve j = " + std::to_string(j_max));
  }
  const TrigTable trig(J);
  TauVector out{q, std::vector<double>(j_max, 0.0)};
  std::vector<double> prod(J + 1);
  for (std::size_t j = 1; j <= j_max; j += 2) {
    for (std::size_t i = 0; i <= J; ++i) prod[i] = f1[i] * trig.sin(j, i);
    out.tau[j - 1] = std::numbers::sqrt2 * simpson(prod, f1.h());
  }
  return out;
}

double tau_infinity(std::size_t j) {
  if (j == 0) throw InvalidInput("tau_infinity: j >= 1");
  if (j % 2 == 0) return 0.0;
  const double jj = static_cast<double>(j);
  const double mag = 4.0 * std::numbers::sqrt2 / (std::numbers::pi * std::numbers::pi * jj * jj);
  return ((j - 1) / 2) % 2 == 0 ? mag : -mag;
}

double tau_bound(double q, std::size_t j) {
  const double jp = static_cast<double>(j) * std::numbers::pi;
  return 2.0 * std::numbers::sqrt2 * pi_q(q) / (jp * jp);
}

double SchauderMatrix::entry(const TauVector& tau, std::size_t k, std::size_t n) {
  if (k < n || k % n != 0) return 0.0;
  const std::size_t m = k / n;
  return (m % 2 == 1) ? tau(m) : 0.0;
}

SchauderMatrix assemble_T(const TauVector& tau, std::size_t modes) {
  if (modes == 0) throw InvalidInput("assemble_T: need at least one mode");
  if (tau.size() < modes) throw InvalidInput("assemble_T: tau does not cover N modes");
  const double diag = tau(1);
  if (diag == 0.0) throw Degeneracy("assemble_T: tau(1) vanishes");

  SchauderMatrix S{tau.q, modes, Eigen::MatrixXd::Zero(modes, modes),
                   Eigen::MatrixXd::Zero(modes, modes)};
  // Off-diagonal nonzero columns of each row: proper divisors i of k with k/i odd.
  std::vector<std::vector<std::size_t>> row_cols(modes + 1);
  for (std::size_t n = 1; n <= modes; ++n) {
    for (std::size_t m = 1; m * n <= modes; m += 2) {
      const std::size_t k = m * n;
      S.T(k - 1, n - 1) = tau(m);
      if (m > 1) row_cols[k].push_back(n);
    }
  }
  // Forward substitution, one column of T^{-1} at a time.
  for (std::size_t n = 1; n <= modes; ++n) {
    S.T_inv(n - 1, n - 1) = 1.0 / diag;
    for (std::size_t k = n + 1; k <= modes; ++k) {
      double acc = 0.0;
      for (std::size_t i : row_cols[k]) {
        if (i >= n) acc += S.T(k - 1, i - 1) * S.T_inv(i - 1, n - 1);
      }
      S.T_inv(k - 1, n - 1) = -acc / diag;
    }
  }
  return S;
}

double inverse_norm(const SchauderMatrix& S) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S.T_inv);
  return svd.singularValues()(0);
}

DualBasis dual_basis(const SchauderMatrix& S, std::size_t intervals) {
  const std::size_t N = S.modes;
  const TrigTable trig(intervals);
  DualBasis dual{S.q, N, S.T_inv, {}, {}};
  dual.f.reserve(N);
  dual.df.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    GridFunction f(intervals), df(intervals);
    for (std::size_t k = 1; k <= n; ++k) {
      const double c = S.T_inv(n - 1, k - 1);
      if (c == 0.0) continue;
      const double a = std::numbers::sqrt2 * c;
      const double b = a * static_cast<double>(k) * std::numbers::pi;
      for (std::size_t j = 0; j <= intervals; ++j) {
        f[j] += a * trig.sin(k, j);
        df[j] += b * trig.cos(k, j);
      }
    }
    dual.f.push_back(std::move(f));
    dual.df.push_back(std::move(df));
  }
  return dual;
}

double estimate_regularity(const TauVector& tau, std::size_t j_lo, std::size_t j_hi) {
  if (j_lo == 0 || j_hi > tau.size() || j_lo > j_hi) {
    throw InvalidInput("estimate_regularity: fit range outside computed tau");
  }
  std::vector<double> js, mags;
  for (std::size_t j = j_lo; j <= j_hi; ++j) {
    if (j % 2 == 0) continue;
    const double t = std::abs(tau(j));
    if (t == 0.0) continue;
    js.push_back(static_cast<double>(j));
    mags.push_back(t);
  }
  if (js.size() < 2) throw InvalidInput("estimate_regularity: fewer than two odd indices in range");
  return -loglog_slope(js, mags) - 0.5;
}

SpectralSpace build_space(double q, std::size_t modes, std::size_t intervals,
                          std::size_t n_quad) {
  auto [f1, df1] = build_f1(q, n_quad, intervals);
  TauVector tau = compute_tau(f1, modes, q);
  QSineBasis basis = sample_basis(q, modes, f1, df1);
  SchauderMatrix S = assemble_T(tau, modes);
  DualBasis dual = dual_basis(S, intervals);
  return {std::move(basis), std::move(tau), std::move(S), std::move(dual)};
}

SpectralSpace two_sine_space(std::size_t modes, std::size_t intervals) {
  if (intervals % (2 * modes) != 0 || intervals < 10 * modes) {
    throw InvalidInput("two_sine_space: grid does not resolve the requested modes");
  }
  const TrigTable trig(intervals);
  QSineBasis basis{QParam(2.0), modes, {}, {}};
  for (std::size_t n = 1; n <= modes; ++n) {
    GridFunction f(intervals), df(intervals);
    const double b = std::numbers::sqrt2 * static_cast<double>(n) * std::numbers::pi;
    for (std::size_t j = 0; j <= intervals; ++j) {
      f[j] = std::numbers::sqrt2 * trig.sin(n, j);
      df[j] = b * trig.cos(n, j);
    }
    basis.f.push_back(f);
    basis.df.push_back(df);
  }
  TauVector tau{2.0, std::vector<double>(modes, 0.0)};
  tau.tau[0] = 1.0;
  SchauderMatrix S = assemble_T(tau, modes);
  DualBasis dual = dual_basis(S, intervals);
  return {std::move(basis), std::move(tau), std::move(S), std::move(dual)};
}

double biorthogonality_error(const SpectralSpace& space) {
  const std::size_t N = space.modes();
  double worst = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = 0; k < N; ++k) {
      const double g = inner(space.basis.f[j], space.dual.f[k]);
      worst = std::max(worst, std::abs(g - (j == k ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace qsine
