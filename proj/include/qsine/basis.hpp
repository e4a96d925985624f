#pragma once

// q-sine eigenfunctions of the one-dimensional q-Laplacian on [0,1].
//
// f_1 is obtained from the integral representation of its inverse on
// [0,1/2], reflected about x = 1/2 and resampled to a uniform grid; higher
// modes follow from f_n(x) = f_1(nx) under the odd 2-periodic extension.
// Normalization: f_n'(0) = n*pi_q and max f_n = 1.

#include <cstddef>
#include <utility>
#include <vector>

#include "qsine/numerics.hpp"

namespace qsine {

inline constexpr std::size_t kDefaultQuadraturePoints = 200000;

/// Exponent q > 1 of the q-sine family.
class QParam {
 public:
  explicit QParam(double q);
  double value() const { return q_; }
  /// Basis property is proven for q >= 12/11; smaller q is accepted but unproven.
  bool riesz_guaranteed() const { return q_ >= 12.0 / 11.0; }

 private:
  double q_;
};

/// Generalized pi: 2*pi / (q sin(pi/q)).
double pi_q(double q);

/// Table of (x, f_1(x), f_1'(x)) on [0, 1/2] from cumulative Simpson
/// quadrature of the inverse-function integral over a uniform y-grid ending
/// at y = 1 - 1/n_quad, closed by the exact node (1/2, 1, 0).
NonUniformTable f1_inverse_table(double q, std::size_t n_quad = kDefaultQuadraturePoints);

/// (1/pi_q) * integral of (1 - t^q)^(-1/q) over [0,1] computed with the same
/// quadrature as the table plus the singular tail; equals 1/2 identically.
double inverse_integral_total(double q, std::size_t n_quad = kDefaultQuadraturePoints);

/// f_1 and f_1' on the uniform grid with `intervals` intervals (even).
std::pair<GridFunction, GridFunction> build_f1(double q, std::size_t n_quad,
                                               std::size_t intervals);

struct QSineBasis {
  QParam q;
  std::size_t modes = 0;
  std::vector<GridFunction> f;   // f[n-1] = f_n
  std::vector<GridFunction> df;  // df[n-1] = f_n'

  std::size_t intervals() const { return f.front().intervals(); }
  double h() const { return f.front().h(); }
};

/// f_1, ..., f_N on a grid of `intervals` intervals; requires intervals divisible by 2N.
QSineBasis sample_basis(double q, std::size_t modes, std::size_t intervals,
                        std::size_t n_quad = kDefaultQuadraturePoints);

/// Same, from an already resampled f_1 / f_1' pair.
QSineBasis sample_basis(double q, std::size_t modes, const GridFunction& f1,
                        const GridFunction& df1);

/// sup_x | |f_n|^q + (n pi_q)^(-q) |f_n'|^q - 1 |.
double pythagorean_residual(const QSineBasis& basis, std::size_t n);

}  // namespace qsine
