#pragma once

// Reference assemblies by direct quadrature on the finest uniform grid of a
// space. They share no code with the table-based operators.

#include "hjsg/alpert/basis.hpp"
#include "hjsg/alpert/flux_table.hpp"
#include "hjsg/core/quadrature.hpp"
#include "hjsg/mra/coeff_field.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace hjsg::oracle
{
using alpert::AlpertBasis1D;
using alpert::Boundary;
using mra::HierCoeffField;
using mra::Side;

// Sum of the expansion at x with a per-dimension one-sided trace.
inline double eval_direct(HierCoeffField const &u, AlpertBasis1D const &basis,
                          std::span<double const> x, std::span<Side const> s)
{
  auto const &space = *u.space();
  int const dim = space.dim();
  int const n = basis.size();
  double sum = 0.0;
  std::vector<double> vals(static_cast<std::size_t>(dim) * n);
  for (std::size_t e = 0; e < space.size(); ++e)
  {
    bool any = true;
    for (int m = 0; m < dim && any; ++m)
    {
      bool nz = false;
      for (int i = 0; i < n; ++i)
      {
        vals[m * n + i] = basis.eval(space.key(e).node(m), i, x[m], s[m]);
        nz = nz || vals[m * n + i] != 0.0;
      }
      any = nz;
    }
    if (!any)
      continue;
    auto const blk = u.block(e);
    for (int flat = 0; flat < u.block_size(); ++flat)
    {
      int r = flat;
      double w = blk[flat];
      for (int m = dim - 1; m >= 0; --m)
      {
        w *= vals[m * n + r % n];
        r /= n;
      }
      sum += w;
    }
  }
  return sum;
}

// Visits every (element, flat index, value) of test functions v at x, with
// optional derivative along dimension dm (-1 for none).
inline void for_each_test_function(mra::AdaptiveSpace const &space, AlpertBasis1D const &basis,
                                   std::span<double const> x, std::span<Side const> s, int dm,
                                   std::function<void(std::size_t, int, double)> const &f)
{
  int const dim = space.dim();
  int const n = basis.size();
  int bs = 1;
  for (int m = 0; m < dim; ++m)
    bs *= n;
  std::vector<double> vals(static_cast<std::size_t>(dim) * n);
  for (std::size_t e = 0; e < space.size(); ++e)
  {
    bool any = true;
    for (int m = 0; m < dim && any; ++m)
    {
      bool nz = false;
      for (int i = 0; i < n; ++i)
      {
        auto const node = space.key(e).node(m);
        vals[m * n + i] = m == dm ? basis.eval_derivative(node, i, x[m], s[m])
                                  : basis.eval(node, i, x[m], s[m]);
        nz = nz || vals[m * n + i] != 0.0;
      }
      any = nz;
    }
    if (!any)
      continue;
    for (int flat = 0; flat < bs; ++flat)
    {
      int r = flat;
      double w = 1.0;
      for (int m = dim - 1; m >= 0; --m)
      {
        w *= vals[m * n + r % n];
        r /= n;
      }
      if (w != 0.0)
        f(e, flat, w);
    }
  }
}

// Tensor Gauss points of the level-L grid; visit(x, weight).
inline void for_each_volume_point(int dim, int L, int q,
                                  std::function<void(std::span<double const>, double)> const &visit)
{
  int const cells = 1 << L;
  double const h = 1.0 / cells;
  auto const unit = gauss_legendre(q, 0.0, 1.0);
  int const per = cells * q;
  long long total = 1;
  for (int m = 0; m < dim; ++m)
    total *= per;
  std::vector<double> x(dim);
  for (long long flat = 0; flat < total; ++flat)
  {
    long long r = flat;
    double w = 1.0;
    for (int m = dim - 1; m >= 0; --m)
    {
      int const g = static_cast<int>(r % per);
      r /= per;
      x[m] = (g / q + unit.nodes[g % q]) * h;
      w *= unit.weights[g % q] * h;
    }
    visit(x, w);
  }
}

// Weak-form integral of the flux-derivative term along dm:
//   out[a] = sum_m c_m ( -int u d_m v_a + sum_faces u_hat [v_a] ),
// where u_hat takes the lower trace when lower(m) holds, else the upper one.
// Periodic faces wrap; outflow boundary faces use the interior trace.
inline HierCoeffField weak_derivative(HierCoeffField const &u, AlpertBasis1D const &basis,
                                      Boundary bc, std::vector<double> const &c,
                                      std::function<bool(int)> const &lower)
{
  auto const &space = *u.space();
  int const dim = space.dim();
  int const L = space.max_level();
  int const q = basis.degree() + 2;
  HierCoeffField out(u.space(), mra::BasisFamily::alpert, basis.degree());
  std::vector<Side> right(dim, Side::right);
  for (int dm = 0; dm < dim; ++dm)
  {
    if (c[dm] == 0.0)
      continue;
    for_each_volume_point(dim, L, q, [&](std::span<double const> x, double w) {
      double const uval = eval_direct(u, basis, x, right);
      for_each_test_function(space, basis, x, right, dm, [&](std::size_t e, int flat, double v) {
        out.block(e)[flat] -= c[dm] * w * uval * v;
      });
    });
    // Faces normal to dm: quadrature in the other dimensions.
    int const cells = 1 << L;
    if (dim == 1)
    {
      for (int fc = 0; fc <= cells; ++fc)
      {
        double const y = static_cast<double>(fc) / cells;
        std::vector<double> xl{y}, xr{y};
        std::vector<Side> sl{Side::left}, sr{Side::right};
        bool lower_exists = fc > 0;
        bool upper_exists = fc < cells;
        if (bc == Boundary::periodic)
        {
          if (fc == cells)
            continue;
          if (fc == 0)
          {
            xl[0] = 1.0;
            lower_exists = true;
          }
        }
        double const ul = lower_exists ? eval_direct(u, basis, xl, sl) : 0.0;
        double const ur = upper_exists ? eval_direct(u, basis, xr, sr) : 0.0;
        double uhat = lower(dm) ? ul : ur;
        if (!lower_exists)
          uhat = ur;
        if (!upper_exists)
          uhat = ul;
        if (lower_exists)
          for_each_test_function(space, basis, xl, sl, -1, [&](std::size_t e, int flat, double v) {
            out.block(e)[flat] += c[dm] * uhat * v;
          });
        if (upper_exists)
          for_each_test_function(space, basis, xr, sr, -1, [&](std::size_t e, int flat, double v) {
            out.block(e)[flat] -= c[dm] * uhat * v;
          });
      }
      continue;
    }
    for_each_volume_point(dim - 1, L, q, [&](std::span<double const> xp, double w) {
      for (int fc = 0; fc <= cells; ++fc)
      {
        double const y = static_cast<double>(fc) / cells;
        std::vector<double> xl(dim), xr(dim);
        std::vector<Side> sl(dim, Side::right), sr(dim, Side::right);
        for (int m = 0, j = 0; m < dim; ++m)
          if (m != dm)
            xl[m] = xr[m] = xp[j++];
        xl[dm] = xr[dm] = y;
        sl[dm] = Side::left;
        bool lower_exists = fc > 0;
        bool upper_exists = fc < cells;
        if (bc == Boundary::periodic)
        {
          if (fc == cells)
            continue;
          if (fc == 0)
          {
            xl[dm] = 1.0;
            lower_exists = true;
          }
        }
        double const ul = lower_exists ? eval_direct(u, basis, xl, sl) : 0.0;
        double const ur = upper_exists ? eval_direct(u, basis, xr, sr) : 0.0;
        double uhat = lower(dm) ? ul : ur;
        if (!lower_exists)
          uhat = ur;
        if (!upper_exists)
          uhat = ul;
        if (lower_exists)
          for_each_test_function(space, basis, xl, sl, -1, [&](std::size_t e, int flat, double v) {
            out.block(e)[flat] += c[dm] * w * uhat * v;
          });
        if (upper_exists)
          for_each_test_function(space, basis, xr, sr, -1, [&](std::size_t e, int flat, double v) {
            out.block(e)[flat] -= c[dm] * w * uhat * v;
          });
      }
    });
  }
  return out;
}

// LDG gradient component p_m^tau from its weak form.
inline HierCoeffField weak_form_gradient(HierCoeffField const &phi, AlpertBasis1D const &basis,
                                         Boundary bc, int m, int tau)
{
  std::vector<double> c(phi.space()->dim(), 0.0);
  c[m] = 1.0;
  return weak_derivative(phi, basis, bc, c, [tau](int) { return tau == 1; });
}

// Upwind DG operator of u_t + sum_m c_m u_{x_m} = 0: returns the Galerkin
// right-hand side, i.e. minus the upwind weak derivative.
inline HierCoeffField upwind_dg_rhs(HierCoeffField const &u, AlpertBasis1D const &basis,
                                    std::vector<double> const &velocity)
{
  auto out = weak_derivative(u, basis, Boundary::periodic, velocity,
                             [&](int m) { return velocity[m] > 0.0; });
  out *= -1.0;
  return out;
}

} // namespace hjsg::oracle
