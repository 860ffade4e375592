#include "hjsg/alpert/basis.hpp"

#include "hjsg/core/error.hpp"
#include "hjsg/core/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

namespace hjsg::alpert
{
double eval_scaling(int i, double x)
{
  if (i < 0)
    throw ConfigError("eval_scaling: negative degree");
  return std::sqrt(2.0 * i + 1.0) * legendre(i, 2.0 * x - 1.0);
}

double eval_scaling_derivative(int i, double x)
{
  if (i < 0)
    throw ConfigError("eval_scaling_derivative: negative degree");
  return 2.0 * std::sqrt(2.0 * i + 1.0) * legendre_derivative(i, 2.0 * x - 1.0);
}

AlpertBasis1D::AlpertBasis1D(int k) : k_(k), left_(k + 1), right_(k + 1)
{
  if (k < 0 || k > max_degree)
    throw ConfigError("Alpert basis: degree " + std::to_string(k) + " outside [0, " +
                      std::to_string(max_degree) + "]");
  int const n = k + 1;
  auto const rule = gauss_legendre(k + 2, 0.0, 0.5);
  double const sqrt2 = std::numbers::sqrt2;

  // Coordinates of the coarse scaling functions in the fine half-cell basis.
  Eigen::MatrixXd c(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r)
    {
      double cl = 0.0;
      double cr = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      {
        double const x = rule.nodes[q];
        double const w = rule.weights[q];
        cl += w * eval_scaling(i, x) * sqrt2 * eval_scaling(r, 2.0 * x);
        cr += w * eval_scaling(i, x + 0.5) * sqrt2 * eval_scaling(r, 2.0 * x);
      }
      c(i, r) = cl;
      c(i, n + r) = cr;
    }

  // Orthonormal complement of the coarse space: trailing columns of a full QR.
  Eigen::MatrixXd const q_full = Eigen::HouseholderQR<Eigen::MatrixXd>(c.transpose()).householderQ();
  Eigen::MatrixXd w = q_full.rightCols(n).transpose(); // rows are wavelets

  if (k > 0)
  {
    // Rotate within the complement so that wavelet i is also orthogonal to
    // x^(k+1), ..., x^(k+i).
    Eigen::MatrixXd mu(n, k);
    auto const fine = gauss_legendre(k + 2 + (2 * k + 1) / 2 + 1, 0.0, 0.5);
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < k; ++p)
      {
        double s = 0.0;
        for (std::size_t q = 0; q < fine.nodes.size(); ++q)
        {
          double const x = fine.nodes[q];
          double left = 0.0;
          double right = 0.0;
          for (int r = 0; r < n; ++r)
          {
            left += w(j, r) * sqrt2 * eval_scaling(r, 2.0 * x);
            right += w(j, n + r) * sqrt2 * eval_scaling(r, 2.0 * x);
          }
          double const pw = k + 1 + p;
          s += fine.weights[q] * (left * std::pow(x, pw) + right * std::pow(x + 0.5, pw));
        }
        mu(j, p) = s;
      }
    Eigen::MatrixXd const qa = Eigen::HouseholderQR<Eigen::MatrixXd>(mu).householderQ();
    w = (qa.transpose() * w).eval();
  }

  for (int i = 0; i < n; ++i)
  {
    double sign = 1.0;
    for (int r = n - 1; r >= 0; --r)
      if (std::abs(w(i, n + r)) > 1e-12)
      {
        sign = w(i, n + r) > 0 ? 1.0 : -1.0;
        break;
      }
    for (int r = 0; r < n; ++r)
    {
      left_[i][r] = sign * w(i, r);
      right_[i][r] = sign * w(i, n + r);
    }
  }
}

double AlpertBasis1D::wavelet(int i, double t, Side s) const
{
  if (!inside_cell(t, s, 0.0, 1.0))
    return 0.0;
  bool const left = t < 0.5 || (t == 0.5 && s == Side::left);
  double const u = left ? 2.0 * t : 2.0 * t - 1.0;
  auto const &coeff = left ? left_[i] : right_[i];
  double v = 0.0;
  for (int r = 0; r <= k_; ++r)
    v += coeff[r] * eval_scaling(r, u);
  return std::numbers::sqrt2 * v;
}

double AlpertBasis1D::wavelet_derivative(int i, double t, Side s) const
{
  if (!inside_cell(t, s, 0.0, 1.0))
    return 0.0;
  bool const left = t < 0.5 || (t == 0.5 && s == Side::left);
  double const u = left ? 2.0 * t : 2.0 * t - 1.0;
  auto const &coeff = left ? left_[i] : right_[i];
  double v = 0.0;
  for (int r = 0; r <= k_; ++r)
    v += coeff[r] * eval_scaling_derivative(r, u);
  return 2.0 * std::numbers::sqrt2 * v;
}

double AlpertBasis1D::eval(Node n, int i, double x, Side s) const
{
  int const level = mra::node_level(n);
  if (level == 0)
    return inside_cell(x, s, 0.0, 1.0) ? eval_scaling(i, x) : 0.0;
  double const scale = std::ldexp(1.0, level - 1);
  double const t = scale * x - static_cast<double>(mra::node_translation(n));
  return std::sqrt(scale) * wavelet(i, t, s);
}

double AlpertBasis1D::eval_derivative(Node n, int i, double x, Side s) const
{
  int const level = mra::node_level(n);
  if (level == 0)
    return inside_cell(x, s, 0.0, 1.0) ? eval_scaling_derivative(i, x) : 0.0;
  double const scale = std::ldexp(1.0, level - 1);
  double const t = scale * x - static_cast<double>(mra::node_translation(n));
  return scale * std::sqrt(scale) * wavelet_derivative(i, t, s);
}

namespace
{
bool inside_ld(long double x, Side s)
{
  return s == Side::right ? (0.0L <= x && x < 1.0L) : (0.0L < x && x <= 1.0L);
}
} // namespace

long double AlpertBasis1D::eval_ld(Node n, int i, long double x, Side s) const
{
  int const level = mra::node_level(n);
  if (level == 0)
    return inside_ld(x, s) ? std::sqrt(2.0L * i + 1.0L) * legendre_ld(i, 2.0L * x - 1.0L) : 0.0L;
  long double const scale = std::ldexp(1.0L, level - 1);
  long double const t = scale * x - static_cast<long double>(mra::node_translation(n));
  if (!inside_ld(t, s))
    return 0.0L;
  bool const left = t < 0.5L || (t == 0.5L && s == Side::left);
  long double const u = left ? 2.0L * t : 2.0L * t - 1.0L;
  auto const &coeff = left ? left_[i] : right_[i];
  long double v = 0.0L;
  for (int r = 0; r <= k_; ++r)
    v += static_cast<long double>(coeff[r]) * std::sqrt(2.0L * r + 1.0L) *
         legendre_ld(r, 2.0L * u - 1.0L);
  return std::sqrt(2.0L * scale) * v;
}

long double AlpertBasis1D::eval_derivative_ld(Node n, int i, long double x, Side s) const
{
  int const level = mra::node_level(n);
  if (level == 0)
    return inside_ld(x, s)
               ? 2.0L * std::sqrt(2.0L * i + 1.0L) * legendre_derivative_ld(i, 2.0L * x - 1.0L)
               : 0.0L;
  long double const scale = std::ldexp(1.0L, level - 1);
  long double const t = scale * x - static_cast<long double>(mra::node_translation(n));
  if (!inside_ld(t, s))
    return 0.0L;
  bool const left = t < 0.5L || (t == 0.5L && s == Side::left);
  long double const u = left ? 2.0L * t : 2.0L * t - 1.0L;
  auto const &coeff = left ? left_[i] : right_[i];
  long double v = 0.0L;
  for (int r = 0; r <= k_; ++r)
    v += static_cast<long double>(coeff[r]) * 2.0L * std::sqrt(2.0L * r + 1.0L) *
         legendre_derivative_ld(r, 2.0L * u - 1.0L);
  // d/dx = scale * d/dt and d/dt = 2 d/du on each half.
  return 2.0L * scale * std::sqrt(2.0L * scale) * v;
}

std::vector<Interval> AlpertBasis1D::pieces(Node n)
{
  Interval const sup = mra::node_support(n);
  if (n == 0)
    return {sup};
  double const mid = 0.5 * (sup.lo + sup.hi);
  return {{sup.lo, mid}, {mid, sup.hi}};
}

AlpertBasis1D build_mother_wavelets(int k) { return AlpertBasis1D(k); }

} // namespace hjsg::alpert
