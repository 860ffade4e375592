#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hjsg::ldg
{
// H(x, q; delta). delta = 0 means the unregularized Hamiltonian; cases with
// norm or absolute-value terms route them through smooth_norm / smooth_abs.
using HamiltonianFn =
    std::function<double(std::span<double const> x, std::span<double const> q, double delta)>;
// Partial derivatives dH/dq_m written to out.
using HamiltonianGradFn = std::function<void(std::span<double const> x, std::span<double const> q,
                                             double delta, std::span<double> out)>;

enum class AlphaMode
{
  analytic,
  sampled
};

struct HamiltonianSpec
{
  std::string name;
  int dim = 1;
  HamiltonianFn H;
  HamiltonianGradFn dH;           // optional; central differences when empty
  std::vector<double> alpha_bound; // analytic bound per dimension; may be empty
  AlphaMode alpha_mode = AlphaMode::analytic;
  bool needs_regularization = false;
  double delta = 0.0;
  double alpha_safety = 1.1;
  double alpha_floor = 1e-12;

  double value(std::span<double const> x, std::span<double const> q) const { return H(x, q, delta); }
  void gradient(std::span<double const> x, std::span<double const> q, std::span<double> out) const;
};

// |q| blended quadratically inside (-delta, delta); |q| itself when delta = 0.
double smooth_abs(double q, double delta);
double smooth_abs_derivative(double q, double delta);
// ||q|| with the same blend in the radial variable.
double smooth_norm(std::span<double const> q, double delta);
void smooth_norm_gradient(std::span<double const> q, double delta, std::span<double> out);

// Copy of spec with delta = 2h when it is tagged for regularization.
HamiltonianSpec regularize(HamiltonianSpec const &spec, double h);

// Global Lax-Friedrichs flux H(pbar) - sum_m alpha_m / 2 (p2_m - p1_m).
// Throws NumericalFailure if H is not finite.
double lax_friedrichs_hamiltonian(HamiltonianSpec const &spec, std::span<double const> x,
                                  std::span<double const> p1, std::span<double const> p2,
                                  std::span<double const> alpha);

// Dissipation constants from sampled gradient values: safety times the
// largest |dH/dq_m| over samples at p1, p2 and their mean, floored. With
// alpha_mode analytic and a bound present, the bound is returned.
// visit(f) must call f(x, p1, p2) once per sample point.
using SampleVisitor = std::function<void(
    std::function<void(std::span<double const>, std::span<double const>, std::span<double const>)> const &)>;
std::vector<double> estimate_alpha(HamiltonianSpec const &spec, SampleVisitor const &visit);

} // namespace hjsg::ldg
