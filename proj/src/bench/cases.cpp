#include "hjsg/bench/cases.hpp"

#include "hjsg/core/error.hpp"
#include "hjsg/mra/element_key.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hjsg::bench
{
namespace
{
double const two_pi = 2.0 * std::numbers::pi;
double const r0 = 0.125;
double const centre = 0.5;
double const newton_tol = 1e-13;

// psi_t + Ht(psi_xi) = 0 with psi(xi, 0) = -cos(2 pi xi) / (2 pi).
struct Reduced
{
  std::function<double(double)> Ht, dHt, d2Ht;
  double speed; // bound on |Ht'| over |p| <= 1

  static double psi0(double xi) { return -std::cos(two_pi * xi) / two_pi; }
  static double dpsi0(double xi) { return std::sin(two_pi * xi); }
  static double d2psi0(double xi) { return two_pi * std::cos(two_pi * xi); }
};

Reduced reduced_for(BenchmarkCase const &c)
{
  double const d = c.dim;
  if (c.id == "burgers")
    return {[d](double p) { return 0.5 * d * d * p * p; }, [d](double p) { return d * d * p; },
            [d](double) { return d * d; }, d * d};
  if (c.id == "cos")
    return {[d](double p) { return -std::cos(d * p + 1.0); },
            [d](double p) { return d * std::sin(d * p + 1.0); },
            [d](double p) { return d * d * std::cos(d * p + 1.0); }, d};
  throw ConfigError("case " + c.id + " has no 1D reduction");
}

// Foot xi0 of the characteristic through (xi, t): xi0 + t Ht'(psi0'(xi0)) = xi.
double characteristic_foot(Reduced const &r, double xi, double t)
{
  auto const F = [&](double z) { return z + t * r.dHt(Reduced::dpsi0(z)) - xi; };
  auto const dF = [&](double z) {
    return 1.0 + t * r.d2Ht(Reduced::dpsi0(z)) * Reduced::d2psi0(z);
  };
  double lo = xi - t * r.speed - 1e-14;
  double hi = xi + t * r.speed + 1e-14;
  double z = xi;
  for (int it = 0; it < 200; ++it)
  {
    double const f = F(z);
    if (std::abs(f) <= newton_tol)
      break;
    (f < 0.0 ? lo : hi) = z;
    double const df = dF(z);
    double next = df > 0.0 ? z - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    z = next;
    if (hi - lo < newton_tol)
      break;
  }
  if (!(std::abs(F(z)) <= 10.0 * newton_tol) || dF(z) <= 0.0)
    throw NumericalFailure("characteristics do not invert at xi = " + std::to_string(xi) +
                           ", t = " + std::to_string(t) + " (past kink formation)");
  return z;
}

double nonlinear2d_reference(std::span<double const> x, double t)
{
  // x = x0 + t (sin 2 pi x0_2, -cos 2 pi x0_1); phi = phi0(x0) + t p1 p2.
  auto const G = [&](double a, double b, double &g0, double &g1) {
    g0 = a + t * std::sin(two_pi * b) - x[0];
    g1 = b - t * std::cos(two_pi * a) - x[1];
  };
  double a = x[0], b = x[1], g0, g1;
  bool converged = false;
  for (int it = 0; it < 50 && !converged; ++it)
  {
    G(a, b, g0, g1);
    if (std::max(std::abs(g0), std::abs(g1)) <= newton_tol)
    {
      converged = true;
      break;
    }
    double const j01 = two_pi * t * std::cos(two_pi * b);
    double const j10 = two_pi * t * std::sin(two_pi * a);
    double const det = 1.0 - j01 * j10;
    if (!(std::abs(det) > 1e-12))
      break;
    a -= (g0 - j01 * g1) / det;
    b -= (g1 - j10 * g0) / det;
  }
  if (!converged && two_pi * t < 1.0)
  {
    // Fixed-point fallback: the map is a contraction when 2 pi t < 1.
    a = x[0];
    b = x[1];
    for (int it = 0; it < 2000 && !converged; ++it)
    {
      double const na = x[0] - t * std::sin(two_pi * b);
      double const nb = x[1] + t * std::cos(two_pi * a);
      converged = std::max(std::abs(na - a), std::abs(nb - b)) <= newton_tol;
      a = na;
      b = nb;
    }
    G(a, b, g0, g1);
    converged = converged && std::max(std::abs(g0), std::abs(g1)) <= 10.0 * newton_tol;
  }
  if (!converged)
    throw NumericalFailure("characteristics do not converge at t = " + std::to_string(t));
  double const p1 = -std::cos(two_pi * a);
  double const p2 = std::sin(two_pi * b);
  double const phi0 = -(std::sin(two_pi * a) + std::cos(two_pi * b)) / two_pi;
  return phi0 + t * p1 * p2;
}

double radial_distance(std::span<double const> x)
{
  double s = 0.0;
  for (double v : x)
    s += (v - centre) * (v - centre);
  return std::sqrt(s);
}

double hjb_exact(std::span<double const> x, double t)
{
  double s = 0.0;
  for (double v : x)
  {
    double const c = v - centre;
    double const cs = std::min(std::max(0.0, c - t), c + t);
    s += cs * cs;
  }
  return radial_profile(std::sqrt(s));
}

double eikonal_exact(std::span<double const> x, double t)
{
  return radial_profile(std::max(radial_distance(x) - t, 0.0));
}

double sum_of(std::span<double const> v)
{
  double s = 0.0;
  for (double a : v)
    s += a;
  return s;
}
} // namespace

double radial_profile(double z) { return (z * z - r0 * r0) / (2.0 * r0); }

std::vector<std::string> case_ids()
{
  return {"burgers", "cos", "nonlinear2d", "eikonal", "hjb", "control"};
}

std::vector<std::vector<double>> BenchmarkCase::breakpoints(double t) const
{
  if (id == "hjb" && t > 0.0)
  {
    std::vector<double> b;
    for (double v : {centre - t, centre + t})
      if (v > 0.0 && v < 1.0)
        b.push_back(v);
    return {b};
  }
  return {};
}

BenchmarkCase make_case(std::string const &id, int dim)
{
  if (dim < 1 || dim > mra::max_dim)
    throw ConfigError("dimension must be in [1, " + std::to_string(mra::max_dim) + "]");
  BenchmarkCase c;
  c.id = id;
  c.dim = dim;
  auto &h = c.hamiltonian;
  h.name = id;
  h.dim = dim;
  auto const sum_cos = [](std::span<double const> x) { return -std::cos(two_pi * sum_of(x)) / two_pi; };
  auto const radial = [](std::span<double const> x) { return radial_profile(radial_distance(x)); };
  if (id == "burgers")
  {
    h.H = [](std::span<double const>, std::span<double const> q, double) {
      double const s = sum_of(q);
      return 0.5 * s * s;
    };
    h.dH = [](std::span<double const>, std::span<double const> q, double, std::span<double> out) {
      std::fill(out.begin(), out.end(), sum_of(q));
    };
    h.alpha_bound.assign(dim, static_cast<double>(dim));
    c.initial = sum_cos;
    c.reference_kind = ReferenceKind::characteristics;
    c.reduces_to_1d = true;
    c.table_time = dim == 2 ? 0.01 : 0.005;
    c.plot_time = dim == 2 ? 0.04 : 0.02;
  }
  else if (id == "cos")
  {
    h.H = [](std::span<double const>, std::span<double const> q, double) {
      return -std::cos(sum_of(q) + 1.0);
    };
    h.dH = [](std::span<double const>, std::span<double const> q, double, std::span<double> out) {
      std::fill(out.begin(), out.end(), std::sin(sum_of(q) + 1.0));
    };
    h.alpha_bound.assign(dim, 1.0);
    c.initial = sum_cos;
    c.reference_kind = ReferenceKind::characteristics;
    c.reduces_to_1d = true;
    c.table_time = dim == 2 ? 0.01 : 0.005;
    c.plot_time = dim == 2 ? 0.06 : 0.03;
  }
  else if (id == "nonlinear2d")
  {
    if (dim != 2)
      throw ConfigError("case nonlinear2d is two-dimensional");
    h.H = [](std::span<double const>, std::span<double const> q, double) { return q[0] * q[1]; };
    h.dH = [](std::span<double const>, std::span<double const> q, double, std::span<double> out) {
      out[0] = q[1];
      out[1] = q[0];
    };
    h.alpha_bound = {1.0, 1.0};
    c.initial = [](std::span<double const> x) {
      return -(std::sin(two_pi * x[0]) + std::cos(two_pi * x[1])) / two_pi;
    };
    c.reference_kind = ReferenceKind::characteristics;
    c.table_time = 0.03;
    c.plot_time = 0.2;
  }
  else if (id == "eikonal")
  {
    h.H = [](std::span<double const>, std::span<double const> q, double delta) {
      return ldg::smooth_norm(q, delta);
    };
    h.dH = [](std::span<double const>, std::span<double const> q, double delta,
              std::span<double> out) { ldg::smooth_norm_gradient(q, delta, out); };
    h.alpha_bound.assign(dim, 1.0);
    h.needs_regularization = true;
    c.initial = radial;
    c.bc = alpert::Boundary::outflow;
    c.reference_kind = ReferenceKind::closed_form;
    c.m_offset = 1;
    c.table_time = 0.1;
    c.plot_time = 0.1;
  }
  else if (id == "hjb")
  {
    h.H = [](std::span<double const>, std::span<double const> q, double delta) {
      double s = 0.0;
      for (double v : q)
        s += ldg::smooth_abs(v, delta);
      return s;
    };
    h.dH = [](std::span<double const>, std::span<double const> q, double delta,
              std::span<double> out) {
      for (std::size_t m = 0; m < q.size(); ++m)
        out[m] = ldg::smooth_abs_derivative(q[m], delta);
    };
    h.alpha_bound.assign(dim, 1.0);
    h.needs_regularization = true;
    c.initial = radial;
    c.bc = alpert::Boundary::outflow;
    c.reference_kind = ReferenceKind::closed_form;
    c.m_offset = 2;
    c.table_time = 0.1;
    c.plot_time = 0.1;
  }
  else if (id == "control")
  {
    if (dim != 2)
      throw ConfigError("case control is two-dimensional");
    // sign(q2) q2 = |q2|, smoothed like the other nonsmooth cases.
    h.H = [](std::span<double const> x, std::span<double const> q, double delta) {
      double const s1 = std::sin(two_pi * x[0]);
      double const s2 = std::sin(two_pi * x[1]);
      return -s2 * q[0] - s1 * q[1] - ldg::smooth_abs(q[1], delta) - 0.5 * s2 * s2 -
             std::cos(two_pi * x[0]) - 1.0;
    };
    h.dH = [](std::span<double const> x, std::span<double const> q, double delta,
              std::span<double> out) {
      out[0] = -std::sin(two_pi * x[1]);
      out[1] = -std::sin(two_pi * x[0]) - ldg::smooth_abs_derivative(q[1], delta);
    };
    h.alpha_bound = {1.0, 2.0};
    h.needs_regularization = true;
    c.initial = [](std::span<double const>) { return 0.0; };
    c.reference_kind = ReferenceKind::none;
    c.m_offset = 2;
    c.table_time = 0.15;
    c.plot_time = 0.15;
  }
  else
    throw ConfigError("unknown case '" + id + "'");

  if (c.reference_kind == ReferenceKind::closed_form)
    c.reference = [cc = c](std::span<double const> x, double t) { return exact_solution(cc, x, t); };
  else if (c.reference_kind == ReferenceKind::characteristics)
    c.reference = [cc = c](std::span<double const> x, double t) {
      return characteristics_reference(cc, x, t);
    };
  return c;
}

double exact_solution(BenchmarkCase const &c, std::span<double const> x, double t)
{
  if (c.id == "eikonal")
    return eikonal_exact(x, t);
  if (c.id == "hjb")
    return hjb_exact(x, t);
  throw ConfigError("case " + c.id + " has no closed-form solution");
}

double reduced_reference(BenchmarkCase const &c, double xi, double t)
{
  Reduced const r = reduced_for(c);
  if (t == 0.0)
    return Reduced::psi0(xi);
  double const base = std::floor(xi);
  double const z = characteristic_foot(r, xi - base, t);
  double const p = Reduced::dpsi0(z);
  return Reduced::psi0(z) + t * (p * r.dHt(p) - r.Ht(p));
}

double characteristics_reference(BenchmarkCase const &c, std::span<double const> x, double t)
{
  if (c.reduces_to_1d)
    return t == 0.0 ? c.initial(x) : reduced_reference(c, sum_of(x), t);
  if (c.id == "nonlinear2d")
    return t == 0.0 ? c.initial(x) : nonlinear2d_reference(x, t);
  throw ConfigError("case " + c.id + " has no characteristics reference");
}

std::vector<double> reduced_kinks(BenchmarkCase const &c, double t, int cells)
{
  Reduced const r = reduced_for(c);
  double const h = 1.0 / cells;
  std::vector<double> psi(cells), next(cells);
  for (int i = 0; i < cells; ++i)
    psi[i] = Reduced::psi0(i * h);
  // Monotone Lax-Friedrichs scheme; slopes stay within [-1, 1].
  double const alpha = r.speed;
  double const dt_max = 0.4 * h / alpha;
  double time = 0.0;
  while (time < t)
  {
    double const dt = std::min(dt_max, t - time);
    for (int i = 0; i < cells; ++i)
    {
      double const pp = (psi[(i + 1) % cells] - psi[i]) / h;
      double const pm = (psi[i] - psi[(i + cells - 1) % cells]) / h;
      next[i] = psi[i] - dt * (r.Ht(0.5 * (pp + pm)) - 0.5 * alpha * (pp - pm));
    }
    psi.swap(next);
    time += dt;
  }
  std::vector<double> jump(cells);
  double jmax = 0.0;
  for (int i = 0; i < cells; ++i)
  {
    double const pp = (psi[(i + 1) % cells] - psi[i]) / h;
    double const pm = (psi[i] - psi[(i + cells - 1) % cells]) / h;
    jump[i] = std::abs(pp - pm);
    jmax = std::max(jmax, jump[i]);
  }
  std::vector<double> kinks;
  for (int i = 0; i < cells; ++i)
  {
    double const j = jump[i];
    if (j < 0.3 * jmax || j < jump[(i + 1) % cells] || j < jump[(i + cells - 1) % cells])
      continue;
    double const xi = i * h;
    bool const near = std::any_of(kinks.begin(), kinks.end(), [&](double k) {
      double const dd = std::abs(k - xi);
      return std::min(dd, 1.0 - dd) < 0.02;
    });
    if (!near)
      kinks.push_back(xi);
  }
  return kinks;
}

} // namespace hjsg::bench
