#pragma once

// Matrix representation of the Schauder transform e_n -> f_n in the
// orthonormal basis e_k = sqrt(2) sin(k pi x), and the dual q-sine basis.
//
// T e_n = sum_{m odd} tau(m) e_{mn}, so T is lower triangular with constant
// diagonal tau(1) and nonzeros only where the row index is an odd multiple of
// the column index. The dual functions f_n* are the trigonometric
// polynomials whose e_k coefficients form row n of T^{-1}.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qsine/basis.hpp"
#include "qsine/numerics.hpp"

namespace qsine {

/// 2-sine coefficients tau(j) = <f_1, e_j>, stored with tau[j-1] = tau(j).
struct TauVector {
  double q = 2.0;
  std::vector<double> tau;

  std::size_t size() const { return tau.size(); }
  double operator()(std::size_t j) const { return tau.at(j - 1); }
};

/// Simpson quadrature of sqrt(2) f_1 sin(j pi x) for j = 1..j_max; even j set to 0.
TauVector compute_tau(const GridFunction& f1, std::size_t j_max, double q);

/// Limit q -> infinity of tau(j): the coefficients of the hat min(2x, 2-2x).
double tau_infinity(std::size_t j);

/// Upper bound 2 sqrt(2) pi_q / (j pi)^2 on |tau(j)|.
double tau_bound(double q, std::size_t j);

struct SchauderMatrix {
  double q = 2.0;
  std::size_t modes = 0;
  Eigen::MatrixXd T;      // lower triangular
  Eigen::MatrixXd T_inv;  // lower triangular

  /// Divisor rule: tau(k/n) when k is an odd multiple of n, else 0 (1-based).
  static double entry(const TauVector& tau, std::size_t k, std::size_t n);
};

/// Assemble the N x N truncation and invert it by forward substitution.
SchauderMatrix assemble_T(const TauVector& tau, std::size_t modes);

/// Spectral norm of the truncated inverse, the computable stand-in for ||T^{-1}||.
double inverse_norm(const SchauderMatrix& S);

struct DualBasis {
  double q = 2.0;
  std::size_t modes = 0;
  Eigen::MatrixXd coeffs;          // row n-1: e_k coefficients of f_n*
  std::vector<GridFunction> f;     // f_n* samples
  std::vector<GridFunction> df;    // (f_n*)' samples, exact derivative of the trig polynomial

  std::size_t intervals() const { return f.front().intervals(); }
};

DualBasis dual_basis(const SchauderMatrix& S, std::size_t intervals);

/// Sobolev exponent s such that |tau(j)| ~ j^-(s + 1/2), fitted over odd j in [j_lo, j_hi].
double estimate_regularity(const TauVector& tau, std::size_t j_lo, std::size_t j_hi);

/// Basis, tau, Schauder matrix and dual for one (q, N, J).
struct SpectralSpace {
  QSineBasis basis;
  TauVector tau;
  SchauderMatrix schauder;
  DualBasis dual;

  double q() const { return basis.q.value(); }
  std::size_t modes() const { return basis.modes; }
  std::size_t intervals() const { return basis.intervals(); }
};

SpectralSpace build_space(double q, std::size_t modes, std::size_t intervals,
                          std::size_t n_quad = kDefaultQuadraturePoints);

/// The 2-sine family e_1..e_N in SpectralSpace form (T = I).
SpectralSpace two_sine_space(std::size_t modes, std::size_t intervals);

/// Biorthogonality error max_{j,k} |<f_j, f_k*> - delta_jk| by grid quadrature.
double biorthogonality_error(const SpectralSpace& space);

}  // namespace qsine
