#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsine {

/// Raised when an argument violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure meets a (numerically) singular input.
class Degeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real function sampled at x_j = j*h, j = 0..J, on [0,1] with h = 1/J.
///
/// J must be even and at least 2 so composite Simpson applies on the grid.
class GridFunction {
 public:
  GridFunction() = default;
  /// Zero function on J intervals.
  explicit GridFunction(std::size_t intervals);
  explicit GridFunction(std::vector<double> values);

  template <typename Fn>
  static GridFunction sample(std::size_t intervals, Fn&& fn) {
    GridFunction g(intervals);
    for (std::size_t j = 0; j <= intervals; ++j) g.values_[j] = fn(g.x(j));
    return g;
  }

  std::size_t intervals() const { return values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  double h() const { return h_; }
  double x(std::size_t j) const { return static_cast<double>(j) * h_; }

  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double a);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double a, GridFunction b) { return b *= a; }

 private:
  void validate() const;

  double h_ = 0.0;
  std::vector<double> values_;
};

/// Samples (x, y, dy/dx) on a strictly increasing, non-uniform grid starting at 0.
struct NonUniformTable {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> dys;

  void validate() const;
};

/// Composite Simpson approximation of the integral over [0, (n-1)h].
/// Requires an odd number of samples (even panel count).
double simpson(std::span<const double> values, double h);
double simpson(const GridFunction& f);

/// Running integrals from 0 to x_j. Even indices are exact Simpson partial
/// sums; odd indices add the quadratic-through-three-points partial panel.
/// The last entry equals simpson(values, h) bit for bit.
std::vector<double> cumulative_simpson(std::span<const double> values, double h);
GridFunction cumulative_simpson(const GridFunction& f);

/// Simpson weights for a uniform grid of n (odd) samples; w . f == simpson(f) up to rounding.
std::vector<double> simpson_weights(std::size_t n, double h);

/// Trapezoid rule on a non-uniform grid.
double trapezoid(std::span<const double> xs, std::span<const double> ys);

/// Cubic Hermite interpolant through (xs, ys) with slopes dys.
double hermite_eval(const NonUniformTable& table, double x);

/// Cubic Hermite interpolant of `table` evaluated on the uniform grid with J intervals.
/// The table must cover [0,1].
GridFunction pchip_resample(const NonUniformTable& table, std::size_t intervals);

/// Bisection for a monotone decreasing function with fn(lo) >= 0 >= fn(hi).
/// Stops once the bracket is narrower than tol and returns its midpoint.
double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol = 1e-12);

/// Least-squares slope of log(ys) against log(xs).
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

/// Quadrature inner product and norms on a common grid.
double inner(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
double l1_norm(const GridFunction& f);
double sup_norm(const GridFunction& f);
double l2_distance(const GridFunction& f, const GridFunction& g);

/// Linear resampling of f onto a grid with `intervals` intervals. Exact
/// injection when the target grid is a coarsening by an integer factor.
GridFunction resample(const GridFunction& f, std::size_t intervals);

/// Grid interval count for an N-mode basis: 100 points per wavelength up to
/// N = 50, 20 points per wavelength above.
std::size_t resolution_intervals(std::size_t modes);

}  // namespace qsine

namespace qsine {

/// sin(k*pi*x_j) and cos(k*pi*x_j) on a uniform grid by exact index reduction:
/// k*x_j = (k*j mod 2J) / J.
class TrigTable {
 public:
  explicit TrigTable(std::size_t intervals);
  double sin(std::size_t k, std::size_t j) const { return sin_[(k * j) % period_]; }
  double cos(std::size_t k, std::size_t j) const { return cos_[(k * j) % period_]; }
  std::size_t intervals() const { return period_ / 2; }

 private:
  std::size_t period_;
  std::vector<double> sin_;
  std::vector<double> cos_;
};

/// e_k(x) = sqrt(2) sin(k pi x) sampled on the grid.
GridFunction sine_mode(std::size_t k, std::size_t intervals);

}  // namespace qsine
