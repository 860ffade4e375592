#include "hjsg/core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hjsg
{
double legendre(int n, double x)
{
  if (n == 0)
    return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int m = 1; m < n; ++m)
  {
    double const p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int n, double x)
{
  // P'_{m+1} = P'_{m-1} + (2m + 1) P_m
  if (n == 0)
    return 0.0;
  double dm1 = 0.0; // P'_{m-1}
  double d = 1.0;   // P'_1
  for (int m = 1; m < n; ++m)
  {
    double const next = dm1 + (2 * m + 1) * legendre(m, x);
    dm1 = d;
    d = next;
  }
  return d;
}

long double legendre_ld(int n, long double x)
{
  if (n == 0)
    return 1.0L;
  long double p0 = 1.0L;
  long double p1 = x;
  for (int m = 1; m < n; ++m)
  {
    long double const p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

long double legendre_derivative_ld(int n, long double x)
{
  if (n == 0)
    return 0.0L;
  long double dm1 = 0.0L;
  long double d = 1.0L;
  for (int m = 1; m < n; ++m)
  {
    long double const next = dm1 + (2 * m + 1) * legendre_ld(m, x);
    dm1 = d;
    d = next;
  }
  return d;
}

namespace
{
QuadratureRule reference_rule(int n)
{
  static std::mutex guard;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(guard);
  if (auto it = cache.find(n); it != cache.end())
    return it->second;

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i)
  {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter)
    {
      double const dx = legendre(n, x) / legendre_derivative(n, x);
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    double const dp = legendre_derivative(n, x);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  cache.emplace(n, rule);
  return rule;
}
} // namespace

QuadratureRule gauss_legendre(int n, double lo, double hi)
{
  if (n < 1)
    throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule = reference_rule(n);
  double const half = 0.5 * (hi - lo);
  double const mid = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i)
  {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

QuadratureRuleLD gauss_legendre_ld(int n, long double lo, long double hi)
{
  if (n < 1)
    throw std::invalid_argument("gauss_legendre_ld: need at least one node");
  QuadratureRule const start = reference_rule(n);
  QuadratureRuleLD rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  long double const half = 0.5L * (hi - lo);
  long double const mid = 0.5L * (hi + lo);
  for (int i = 0; i < n; ++i)
  {
    long double x = start.nodes[i];
    for (int iter = 0; iter < 4; ++iter)
      x -= legendre_ld(n, x) / legendre_derivative_ld(n, x);
    long double const dp = legendre_derivative_ld(n, x);
    rule.nodes[i] = mid + half * x;
    rule.weights[i] = half * 2.0L / ((1.0L - x * x) * dp * dp);
  }
  return rule;
}

} // namespace hjsg
