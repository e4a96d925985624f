#include "qsine/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qsine {

GridFunction::GridFunction(std::size_t intervals) : values_(intervals + 1, 0.0) {
  validate();
  h_ = 1.0 / static_cast<double>(intervals);
}

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  validate();
  h_ = 1.0 / static_cast<double>(values_.size() - 1);
}

void GridFunction::validate() const {
  const std::size_t n = values_.size();
  if (n < 3 || (n - 1) % 2 != 0) {
    throw InvalidInput("GridFunction needs an even number of intervals >= 2, got " +
                       std::to_string(n == 0 ? 0 : n - 1));
  }
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (other.size() != size()) throw InvalidInput("GridFunction size mismatch");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (other.size() != size()) throw InvalidInput("GridFunction size mismatch");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

GridFunction& GridFunction::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

void NonUniformTable::validate() const {
  if (xs.size() < 2 || ys.size() != xs.size() || dys.size() != xs.size()) {
    throw InvalidInput("NonUniformTable needs >= 2 nodes and matching column lengths");
  }
  if (xs.front() != 0.0) throw InvalidInput("NonUniformTable must start at x = 0");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw InvalidInput("NonUniformTable xs must be strictly increasing");
  }
}

namespace {

void check_simpson_length(std::size_t n) {
  if (n < 3 || n % 2 == 0) {
    throw InvalidInput("Simpson's rule needs an odd number (>= 3) of samples, got " +
                       std::to_string(n));
  }
}

}  // namespace

double simpson(std::span<const double> values, double h) {
  check_simpson_length(values.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 2 < values.size(); i += 2) {
    total += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
  }
  return total;
}

double simpson(const GridFunction& f) { return simpson(f.values(), f.h()); }

std::vector<double> cumulative_simpson(std::span<const double> values, double h) {
  check_simpson_length(values.size());
  std::vector<double> out(values.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 2 < values.size(); i += 2) {
    const double f0 = values[i], f1 = values[i + 1], f2 = values[i + 2];
    out[i + 1] = total + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
    total += h / 3.0 * (f0 + 4.0 * f1 + f2);
    out[i + 2] = total;
  }
  return out;
}

GridFunction cumulative_simpson(const GridFunction& f) {
  return GridFunction(cumulative_simpson(f.values(), f.h()));
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  check_simpson_length(n);
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 2 < n; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  return w;
}

double trapezoid(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInput("trapezoid needs >= 2 nodes with matching lengths");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    total += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  }
  return total;
}

namespace {

double hermite_segment(const NonUniformTable& t, std::size_t i, double x) {
  const double x0 = t.xs[i], x1 = t.xs[i + 1];
  const double dx = x1 - x0;
  const double s = (x - x0) / dx;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * t.ys[i] + h10 * dx * t.dys[i] + h01 * t.ys[i + 1] + h11 * dx * t.dys[i + 1];
}

}  // namespace

double hermite_eval(const NonUniformTable& table, double x) {
  if (x < table.xs.front() || x > table.xs.back()) {
    throw InvalidInput("hermite_eval: x outside the table range");
  }
  auto it = std::upper_bound(table.xs.begin(), table.xs.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(table.xs.begin(), it));
  i = (i == 0) ? 0 : i - 1;
  if (i + 1 >= table.xs.size()) i = table.xs.size() - 2;
  return hermite_segment(table, i, x);
}

GridFunction pchip_resample(const NonUniformTable& table, std::size_t intervals) {
  table.validate();
  if (std::abs(table.xs.back() - 1.0) > 1e-14) {
    throw InvalidInput("pchip_resample: table must cover [0,1]");
  }
  GridFunction out(intervals);
  std::size_t seg = 0;
  const std::size_t last = table.xs.size() - 2;
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double x = (j == intervals) ? 1.0 : out.x(j);
    while (seg < last && table.xs[seg + 1] <= x) ++seg;
    if (x == table.xs[seg]) {
      out[j] = table.ys[seg];
    } else if (x == table.xs[seg + 1]) {
      out[j] = table.ys[seg + 1];
    } else {
      out[j] = hermite_segment(table, seg, x);
    }
  }
  return out;
}

double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("bisect: tol must be positive");
  if (!(lo <= hi)) throw InvalidInput("bisect: need lo <= hi");
  const double flo = fn(lo), fhi = fn(hi);
  if (!(flo >= 0.0 && fhi <= 0.0)) {
    throw InvalidInput("bisect: endpoints do not bracket a root of a decreasing function");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInput("loglog_slope needs >= 2 points with matching lengths");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidInput("loglog_slope needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("loglog_slope needs at least two distinct xs");
  return sxy / sxx;
}

double inner(const GridFunction& f, const GridFunction& g) {
  if (f.size() != g.size()) throw InvalidInput("inner: grid mismatch");
  GridFunction prod(f.intervals());
  for (std::size_t j = 0; j < f.size(); ++j) prod[j] = f[j] * g[j];
  return simpson(prod);
}

double l2_norm(const GridFunction& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

double l1_norm(const GridFunction& f) {
  GridFunction a(f.intervals());
  for (std::size_t j = 0; j < f.size(); ++j) a[j] = std::abs(f[j]);
  return simpson(a);
}

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double l2_distance(const GridFunction& f, const GridFunction& g) {
  if (f.size() == g.size()) return l2_norm(f - g);
  const std::size_t fine = std::max(f.intervals(), g.intervals());
  return l2_norm(resample(f, fine) - resample(g, fine));
}

GridFunction resample(const GridFunction& f, std::size_t intervals) {
  if (intervals == f.intervals()) return f;
  GridFunction out(intervals);
  const std::size_t src = f.intervals();
  if (intervals < src && src % intervals == 0) {
    const std::size_t stride = src / intervals;
    for (std::size_t j = 0; j <= intervals; ++j) out[j] = f[j * stride];
    return out;
  }
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double pos = out.x(j) * static_cast<double>(src);
    std::size_t i = std::min(static_cast<std::size_t>(pos), src - 1);
    const double t = pos - static_cast<double>(i);
    out[j] = (1.0 - t) * f[i] + t * f[i + 1];
  }
  return out;
}

std::size_t resolution_intervals(std::size_t modes) {
  if (modes == 0) throw InvalidInput("resolution_intervals: need at least one mode");
  return modes <= 50 ? 100 * modes : 20 * modes;
}

}  // namespace qsine

namespace qsine {

TrigTable::TrigTable(std::size_t intervals)
    : period_(2 * intervals), sin_(2 * intervals), cos_(2 * intervals) {
  if (intervals == 0) throw InvalidInput("TrigTable needs a positive interval count");
  const double J = static_cast<double>(intervals);
  for (std::size_t m = 0; m < period_; ++m) {
    const double t = std::numbers::pi * static_cast<double>(m) / J;
    sin_[m] = std::sin(t);
    cos_[m] = std::cos(t);
  }
  // Exact zeros and ones at the quarter points.
  sin_[0] = 0.0;
  sin_[intervals] = 0.0;
  cos_[0] = 1.0;
  cos_[intervals] = -1.0;
  if (intervals % 2 == 0) {
    cos_[intervals / 2] = 0.0;
    cos_[3 * intervals / 2] = 0.0;
    sin_[intervals / 2] = 1.0;
    sin_[3 * intervals / 2] = -1.0;
  }
}

GridFunction sine_mode(std::size_t k, std::size_t intervals) {
  const TrigTable trig(intervals);
  GridFunction e(intervals);
  for (std::size_t j = 0; j <= intervals; ++j) e[j] = std::numbers::sqrt2 * trig.sin(k, j);
  return e;
}

}  // namespace qsine
