#pragma once

#include <vector>

namespace hjsg
{
struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [lo, hi]. Exact for polynomials of degree
// 2n - 1. Rules are computed by Newton iteration on P_n and cached.
QuadratureRule gauss_legendre(int n, double lo = 0.0, double hi = 1.0);

struct QuadratureRuleLD
{
  std::vector<long double> nodes;
  std::vector<long double> weights;
};
QuadratureRuleLD gauss_legendre_ld(int n, long double lo, long double hi);

// Legendre polynomial P_n and its derivative at x in [-1, 1].
double legendre(int n, double x);
double legendre_derivative(int n, double x);
// Extended-precision variants for table assembly.
long double legendre_ld(int n, long double x);
long double legendre_derivative_ld(int n, long double x);

} // namespace hjsg
