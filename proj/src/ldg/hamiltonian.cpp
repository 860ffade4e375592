#include "hjsg/ldg/hamiltonian.hpp"

#include "hjsg/core/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hjsg::ldg
{
void HamiltonianSpec::gradient(std::span<double const> x, std::span<double const> q,
                               std::span<double> out) const
{
  if (dH)
  {
    dH(x, q, delta, out);
    return;
  }
  std::vector<double> qq(q.begin(), q.end());
  for (std::size_t m = 0; m < q.size(); ++m)
  {
    double const h = 1e-6 * (1.0 + std::abs(q[m]));
    qq[m] = q[m] + h;
    double const fp = H(x, qq, delta);
    qq[m] = q[m] - h;
    double const fm = H(x, qq, delta);
    qq[m] = q[m];
    out[m] = (fp - fm) / (2.0 * h);
  }
}

double smooth_abs(double q, double delta)
{
  double const a = std::abs(q);
  if (delta <= 0.0 || a >= delta)
    return a;
  return q * q / (2.0 * delta) + 0.5 * delta;
}

double smooth_abs_derivative(double q, double delta)
{
  if (delta <= 0.0 || std::abs(q) >= delta)
    return q > 0.0 ? 1.0 : (q < 0.0 ? -1.0 : 0.0);
  return q / delta;
}

double smooth_norm(std::span<double const> q, double delta)
{
  double s = 0.0;
  for (double v : q)
    s += v * v;
  double const r = std::sqrt(s);
  if (delta <= 0.0 || r >= delta)
    return r;
  return s / (2.0 * delta) + 0.5 * delta;
}

void smooth_norm_gradient(std::span<double const> q, double delta, std::span<double> out)
{
  double s = 0.0;
  for (double v : q)
    s += v * v;
  double const r = std::sqrt(s);
  for (std::size_t m = 0; m < q.size(); ++m)
  {
    if (delta > 0.0 && r < delta)
      out[m] = q[m] / delta;
    else
      out[m] = r > 0.0 ? q[m] / r : 0.0;
  }
}

HamiltonianSpec regularize(HamiltonianSpec const &spec, double h)
{
  HamiltonianSpec out = spec;
  if (spec.needs_regularization)
    out.delta = 2.0 * h;
  return out;
}

double lax_friedrichs_hamiltonian(HamiltonianSpec const &spec, std::span<double const> x,
                                  std::span<double const> p1, std::span<double const> p2,
                                  std::span<double const> alpha)
{
  std::array<double, 8> pbar{};
  std::size_t const d = p1.size();
  double diss = 0.0;
  for (std::size_t m = 0; m < d; ++m)
  {
    pbar[m] = 0.5 * (p1[m] + p2[m]);
    diss += 0.5 * alpha[m] * (p2[m] - p1[m]);
  }
  double const h = spec.value(x, std::span<double const>(pbar.data(), d));
  if (!std::isfinite(h))
    throw NumericalFailure("Hamiltonian '" + spec.name + "' returned a non-finite value");
  return h - diss;
}

std::vector<double> estimate_alpha(HamiltonianSpec const &spec, SampleVisitor const &visit)
{
  int const d = spec.dim;
  if (spec.alpha_mode == AlphaMode::analytic && static_cast<int>(spec.alpha_bound.size()) == d)
    return spec.alpha_bound;
  std::vector<double> amax(d, 0.0);
  std::vector<double> grad(d);
  std::vector<double> pbar(d);
  visit([&](std::span<double const> x, std::span<double const> p1, std::span<double const> p2) {
    for (int m = 0; m < d; ++m)
      pbar[m] = 0.5 * (p1[m] + p2[m]);
    for (auto const q : {p1, p2, std::span<double const>(pbar)})
    {
      spec.gradient(x, q, grad);
      for (int m = 0; m < d; ++m)
        if (std::isfinite(grad[m]))
          amax[m] = std::max(amax[m], std::abs(grad[m]));
    }
  });
  for (double &a : amax)
    a = std::max(spec.alpha_safety * a, spec.alpha_floor);
  return amax;
}

} // namespace hjsg::ldg
