#pragma once

#include "hjsg/mra/node.hpp"

#include <array>
#include <vector>

namespace hjsg::alpert
{
using mra::Interval;
using mra::Node;
using mra::Side;

inline constexpr int max_degree = 3;

// sqrt(2i+1) P_i(2x-1), orthonormal on [0, 1].
double eval_scaling(int i, double x);
double eval_scaling_derivative(int i, double x);

// Point-inside test for a half-open cell: right limits live in [lo, hi),
// left limits in (lo, hi].
inline bool inside_cell(double x, Side s, double lo, double hi)
{
  return s == Side::right ? (lo <= x && x < hi) : (lo < x && x <= hi);
}

// Alpert multiwavelets of degree k on the unit interval. The k+1 mother
// wavelets h_i are stored by their coefficients in the orthonormal Legendre
// bases of the two halves: on [0, 1/2) h_i = sum_r L[i][r] sqrt(2) v_r(2x),
// on [1/2, 1] h_i = sum_r R[i][r] sqrt(2) v_r(2x - 1).
//
// Conventions: h_i has vanishing moments against x^p for p <= k + i (the k
// wavelets beyond h_0 carry Alpert's extra moments), and the last nonzero
// right-half coefficient of every h_i is positive.
class AlpertBasis1D
{
public:
  explicit AlpertBasis1D(int k);

  int degree() const { return k_; }
  int size() const { return k_ + 1; }

  double left_coeff(int i, int r) const { return left_[i][r]; }
  double right_coeff(int i, int r) const { return right_[i][r]; }

  // Mother wavelet h_i at t in [0, 1], one-sided at the midpoint and ends.
  double wavelet(int i, double t, Side s) const;
  double wavelet_derivative(int i, double t, Side s) const;

  // Hierarchical basis function of node n and degree i (one-sided trace at
  // breakpoints, zero outside the support).
  double eval(Node n, int i, double x, Side s = Side::right) const;
  double eval_derivative(Node n, int i, double x, Side s = Side::right) const;

  // Extended-precision evaluation used when assembling operator tables.
  long double eval_ld(Node n, int i, long double x, Side s = Side::right) const;
  long double eval_derivative_ld(Node n, int i, long double x, Side s = Side::right) const;

  // Intervals on which the basis functions of node n are polynomials.
  static std::vector<Interval> pieces(Node n);

private:
  int k_;
  std::vector<std::array<double, max_degree + 1>> left_;
  std::vector<std::array<double, max_degree + 1>> right_;
};

// Validates k and builds the basis.
AlpertBasis1D build_mother_wavelets(int k);

} // namespace hjsg::alpert
