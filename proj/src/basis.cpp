#include "qsine/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qsine {

QParam::QParam(double q) : q_(q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw InvalidInput("q must be a finite real > 1, got " + std::to_string(q));
  }
}

double pi_q(double q) {
  QParam checked(q);
  return 2.0 * std::numbers::pi / (q * std::sin(std::numbers::pi / q));
}

namespace {

// 1 - t^q without cancellation near t = 1.
double one_minus_pow(double t, double q) {
  if (t <= 0.0) return 1.0;
  return -std::expm1(q * std::log(t));
}

// The integrand (1 - t^q)^(-1/q) behaves like (q(1-t))^(-1/q) at t = 1.
// The leading singular term is integrated in closed form; Simpson only sees
// the bounded remainder.
double singular_part_integral(double q, double a, double b) {
  const double e = 1.0 - 1.0 / q;
  return std::pow(q, -1.0 / q) * (std::pow(1.0 - a, e) - std::pow(1.0 - b, e)) / e;
}

double regular_part(double t, double q) {
  if (t >= 1.0) return 0.0;
  return std::pow(one_minus_pow(t, q), -1.0 / q) - std::pow(q * (1.0 - t), -1.0 / q);
}

struct YGrid {
  std::vector<double> ys;
  double dy = 0.0;
};

YGrid quadrature_grid(std::size_t n_quad) {
  if (n_quad < 1000) throw InvalidInput("f1 quadrature needs n_quad >= 1000");
  const std::size_t panels = n_quad + (n_quad % 2);
  const double y_end = 1.0 - 1.0 / static_cast<double>(n_quad);
  YGrid grid;
  grid.dy = y_end / static_cast<double>(panels);
  grid.ys.resize(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) grid.ys[i] = static_cast<double>(i) * grid.dy;
  grid.ys.back() = y_end;
  return grid;
}

std::vector<double> cumulative_inverse_integral(double q, const YGrid& grid) {
  std::vector<double> reg(grid.ys.size());
  for (std::size_t i = 0; i < reg.size(); ++i) reg[i] = regular_part(grid.ys[i], q);
  std::vector<double> acc = cumulative_simpson(reg, grid.dy);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i] += singular_part_integral(q, 0.0, grid.ys[i]);
  }
  return acc;
}

}  // namespace

NonUniformTable f1_inverse_table(double q, std::size_t n_quad) {
  const double pq = pi_q(q);
  const YGrid grid = quadrature_grid(n_quad);
  const std::vector<double> acc = cumulative_inverse_integral(q, grid);

  NonUniformTable table;
  table.xs.reserve(acc.size() + 1);
  table.ys.reserve(acc.size() + 1);
  table.dys.reserve(acc.size() + 1);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    table.xs.push_back(acc[i] / pq);
    table.ys.push_back(grid.ys[i]);
    table.dys.push_back(pq * std::pow(one_minus_pow(grid.ys[i], q), 1.0 / q));
  }
  table.xs.front() = 0.0;
  if (!(table.xs.back() < 0.5)) {
    throw Degeneracy("f1 inverse table overshoots x = 1/2 at q = " + std::to_string(q));
  }
  table.xs.push_back(0.5);
  table.ys.push_back(1.0);
  table.dys.push_back(0.0);
  return table;
}

double inverse_integral_total(double q, std::size_t n_quad) {
  const YGrid grid = quadrature_grid(n_quad);
  const std::vector<double> acc = cumulative_inverse_integral(q, grid);
  const double y_end = grid.ys.back();
  constexpr std::size_t kTailPanels = 64;
  std::vector<double> tail(kTailPanels + 1);
  const double dt = (1.0 - y_end) / kTailPanels;
  for (std::size_t i = 0; i <= kTailPanels; ++i) {
    tail[i] = regular_part(y_end + static_cast<double>(i) * dt, q);
  }
  const double total =
      acc.back() + singular_part_integral(q, y_end, 1.0) + simpson(tail, dt);
  return total / pi_q(q);
}

std::pair<GridFunction, GridFunction> build_f1(double q, std::size_t n_quad,
                                               std::size_t intervals) {
  if (intervals % 2 != 0 || intervals < 2) {
    throw InvalidInput("build_f1 needs an even interval count");
  }
  const NonUniformTable half = f1_inverse_table(q, n_quad);

  // Even reflection about x = 1/2.
  NonUniformTable full;
  const std::size_t m = half.xs.size();
  full.xs.reserve(2 * m - 1);
  full.ys.reserve(2 * m - 1);
  full.dys.reserve(2 * m - 1);
  full.xs = half.xs;
  full.ys = half.ys;
  full.dys = half.dys;
  for (std::size_t i = m - 1; i-- > 0;) {
    full.xs.push_back(1.0 - half.xs[i]);
    full.ys.push_back(half.ys[i]);
    full.dys.push_back(-half.dys[i]);
  }
  full.xs.back() = 1.0;

  GridFunction f1 = pchip_resample(full, intervals);
  const std::size_t mid = intervals / 2;
  for (std::size_t j = 0; j <= mid; ++j) f1[j] = std::clamp(f1[j], 0.0, 1.0);
  for (std::size_t j = mid + 1; j <= intervals; ++j) f1[j] = f1[intervals - j];
  f1[0] = 0.0;
  f1[intervals] = 0.0;
  f1[mid] = 1.0;

  const double pq = pi_q(q);
  GridFunction df1(intervals);
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double mag = pq * std::pow(one_minus_pow(f1[j], q), 1.0 / q);
    df1[j] = (j < mid) ? mag : (j > mid ? -mag : 0.0);
  }
  return {std::move(f1), std::move(df1)};
}

QSineBasis sample_basis(double q, std::size_t modes, const GridFunction& f1,
                        const GridFunction& df1) {
  const std::size_t J = f1.intervals();
  if (modes == 0) throw InvalidInput("sample_basis needs at least one mode");
  if (df1.intervals() != J) throw InvalidInput("sample_basis: f1/df1 grid mismatch");
  if (J % (2 * modes) != 0 || J < 10 * modes) {
    throw InvalidInput("sample_basis: " + std::to_string(J) +
                       " intervals do not resolve " + std::to_string(modes) + " modes");
  }
  QSineBasis basis{QParam(q), modes, {}, {}};
  basis.f.reserve(modes);
  basis.df.reserve(modes);
  for (std::size_t n = 1; n <= modes; ++n) {
    GridFunction fn(J), dfn(J);
    const double scale = static_cast<double>(n);
    for (std::size_t j = 0; j <= J; ++j) {
      // n*x_j in units of h, reduced modulo the period 2 of the odd extension.
      const std::size_t k = (n * j) % (2 * J);
      if (k <= J) {
        fn[j] = f1[k];
        dfn[j] = scale * df1[k];
      } else {
        fn[j] = -f1[k - J];
        dfn[j] = -scale * df1[k - J];
      }
    }
    basis.f.push_back(std::move(fn));
    basis.df.push_back(std::move(dfn));
  }
  return basis;
}

QSineBasis sample_basis(double q, std::size_t modes, std::size_t intervals,
                        std::size_t n_quad) {
  auto [f1, df1] = build_f1(q, n_quad, intervals);
  return sample_basis(q, modes, f1, df1);
}

double pythagorean_residual(const QSineBasis& basis, std::size_t n) {
  if (n < 1 || n > basis.modes) throw InvalidInput("pythagorean_residual: mode out of range");
  const double q = basis.q.value();
  const double scale = std::pow(static_cast<double>(n) * pi_q(q), -q);
  const GridFunction& f = basis.f[n - 1];
  const GridFunction& df = basis.df[n - 1];
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = std::pow(std::abs(f[j]), q) + scale * std::pow(std::abs(df[j]), q) - 1.0;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace qsine
