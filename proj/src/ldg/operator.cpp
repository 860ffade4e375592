#include "hjsg/ldg/operator.hpp"

#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"
#include "hjsg/core/parallel.hpp"
#include "hjsg/mra/unidirectional.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace hjsg::ldg
{
using mra::BasisFamily;

namespace
{
mra::Operator1D flux_operator(DiscretizationConfig const &cfg, alpert::AlpertBasis1D const &basis,
                              int tau)
{
  std::string const name = "flux_tau" + std::to_string(tau) + "_k" + std::to_string(cfg.k) + "_N" +
                           std::to_string(cfg.max_level) + "_" + alpert::boundary_name(cfg.bc);
  return alpert::cached_operator(cfg.table_cache_dir, name, [&] {
    return alpert::build_flux_deriv_table(tau, cfg.max_level, basis, cfg.bc);
  });
}

// Per-element interpolation point coordinates, cached per dimension.
struct ElementPoints
{
  int dim;
  int n;
  std::vector<interp::InterpPoint> pts;

  ElementPoints(int dim_, int n_) : dim(dim_), n(n_), pts(static_cast<std::size_t>(dim_) * n_) {}

  void load(interp::InterpBasis1D const &basis, mra::ElementKey const &key)
  {
    for (int m = 0; m < dim; ++m)
      for (int i = 0; i < n; ++i)
        pts[m * n + i] = basis.point(key.node(m), i);
  }
  void coords(int flat, std::span<double> x) const
  {
    for (int m = dim - 1; m >= 0; --m)
    {
      x[m] = pts[m * n + flat % n].x;
      flat /= n;
    }
  }
};

void write_diagnostics(std::filesystem::path const &path, mra::AdaptiveSpace const &space,
                       std::vector<double> const &hmax, std::vector<double> const &gmax)
{
  write_file_atomic(path.string(), [&](std::ostream &out) {
    int const dim = space.dim();
    for (int m = 0; m < dim; ++m)
      out << "l" << m + 1 << ',';
    for (int m = 0; m < dim; ++m)
      out << "j" << m + 1 << ',';
    out << "max_abs_flux,max_abs_gradient\n" << std::setprecision(10);
    for (std::size_t e = 0; e < space.size(); ++e)
    {
      mra::ElementKey const key = space.key(e);
      for (int m = 0; m < dim; ++m)
        out << key.level(m) << ',';
      for (int m = 0; m < dim; ++m)
        out << key.translation(m) << ',';
      out << hmax[e] << ',' << gmax[e] << '\n';
    }
  });
}
} // namespace

LdgOperator::LdgOperator(DiscretizationConfig const &cfg)
    : cfg_(cfg), transforms_(cfg.k, cfg.M, cfg.max_level),
      flux1_(flux_operator(cfg, transforms_.alpert(), 1)),
      flux2_(flux_operator(cfg, transforms_.alpert(), 2))
{
  if (cfg.dim < 1 || cfg.dim > mra::max_dim)
    throw ConfigError("dimension must be in [1, " + std::to_string(mra::max_dim) + "]");
}

Gradients LdgOperator::reconstruct_gradients(HierCoeffField const &phi, bool serial) const
{
  if (phi.family() != BasisFamily::alpert || phi.shape().ncomp != 1)
    throw ConfigError("reconstruct_gradients: expected a scalar Alpert field");
  int const dim = phi.space()->dim();
  std::vector<HierCoeffField> parts;
  parts.reserve(2 * dim);
  for (int m = 0; m < dim; ++m)
    for (int tau = 1; tau <= 2; ++tau)
      parts.push_back(serial ? mra::apply_dim_serial(flux_table(tau), m, mra::CouplingPart::full,
                                                     phi, BasisFamily::alpert)
                             : mra::apply_dim(flux_table(tau), m, mra::CouplingPart::full, phi,
                                              BasisFamily::alpert));
  std::vector<HierCoeffField const *> ptrs;
  for (auto const &p : parts)
    ptrs.push_back(&p);
  return {HierCoeffField::stack(ptrs)};
}

std::vector<double> LdgOperator::alpha_for(HierCoeffField const &phi,
                                           HamiltonianSpec const &spec) const
{
  if (spec.alpha_mode == AlphaMode::analytic &&
      static_cast<int>(spec.alpha_bound.size()) == spec.dim)
    return spec.alpha_bound;
  std::vector<double> alpha;
  RhsOptions opt;
  opt.refresh_alpha = true;
  rhs(phi, spec, alpha, opt);
  return alpha;
}

HierCoeffField LdgOperator::rhs(HierCoeffField const &phi, HamiltonianSpec const &spec,
                                std::vector<double> &alpha, RhsOptions const &options) const
{
  if (spec.dim != phi.space()->dim())
    throw ConfigError("Hamiltonian dimension does not match the space");
  return rhs_from_gradients(reconstruct_gradients(phi, options.serial), spec, alpha, options);
}

HierCoeffField LdgOperator::rhs_from_gradients(Gradients const &grads, HamiltonianSpec const &spec,
                                               std::vector<double> &alpha,
                                               RhsOptions const &options) const
{
  mra::SpacePtr const &space = grads.stacked.space();
  int const dim = space->dim();
  if (spec.dim != dim)
    throw ConfigError("Hamiltonian dimension does not match the space");
  if (grads.stacked.shape().ncomp != 2 * dim)
    throw ConfigError("rhs_from_gradients: expected 2d gradient components");
  HierCoeffField const pv = transforms_.eval_at_points(grads.stacked, options.serial);
  auto const &basis = transforms_.interp();
  int const n = basis.size();
  int const cs = pv.shape().component_size();
  auto const elements = static_cast<std::ptrdiff_t>(space->size());

  bool const sampled = spec.alpha_mode == AlphaMode::sampled ||
                       static_cast<int>(spec.alpha_bound.size()) != dim;
  if (options.refresh_alpha || static_cast<int>(alpha.size()) != dim)
  {
    if (!sampled)
      alpha = spec.alpha_bound;
    else
      alpha = estimate_alpha(spec, [&](auto const &visit) {
        ElementPoints ep(dim, n);
        std::vector<double> x(dim), p1(dim), p2(dim);
        for (std::ptrdiff_t e = 0; e < elements; ++e)
        {
          ep.load(basis, space->key(e));
          double const *blk = pv.block(e).data();
          for (int f = 0; f < cs; ++f)
          {
            ep.coords(f, x);
            for (int m = 0; m < dim; ++m)
            {
              p1[m] = blk[(2 * m) * cs + f];
              p2[m] = blk[(2 * m + 1) * cs + f];
            }
            visit(x, p1, p2);
          }
        }
      });
  }

  HierCoeffField hv(space, BasisFamily::point_values, cfg_.M);
  bool failed = false;
  ExceptionSink sink;
#pragma omp parallel num_threads(max_threads())
  {
    ElementPoints ep(dim, n);
    std::array<double, mra::max_dim> x{}, pbar{};
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t e = 0; e < elements; ++e)
    {
      ep.load(basis, space->key(e));
      double const *blk = pv.block(e).data();
      double *out = hv.block(e).data();
      for (int f = 0; f < cs; ++f)
      {
        ep.coords(f, std::span<double>(x.data(), dim));
        double diss = 0.0;
        for (int m = 0; m < dim; ++m)
        {
          double const p1 = blk[(2 * m) * cs + f];
          double const p2 = blk[(2 * m + 1) * cs + f];
          pbar[m] = 0.5 * (p1 + p2);
          diss += 0.5 * alpha[m] * (p2 - p1);
        }
        double const v = sink.value([&] {
                           return spec.value(std::span<double const>(x.data(), dim),
                                             std::span<double const>(pbar.data(), dim));
                         }) -
                         diss;
        out[f] = v;
        if (!std::isfinite(v))
        {
#pragma omp atomic write
          failed = true;
        }
      }
    }
  }
  sink.rethrow();
  if (failed)
  {
    std::vector<double> hmax(space->size(), 0.0), gmax(space->size(), 0.0);
    std::ptrdiff_t first = -1;
    for (std::ptrdiff_t e = 0; e < elements; ++e)
    {
      for (double v : hv.block(e))
        hmax[e] = std::isfinite(v) ? std::max(hmax[e], std::abs(v)) : v;
      for (double v : pv.block(e))
        gmax[e] = std::isfinite(v) ? std::max(gmax[e], std::abs(v)) : v;
      if (first < 0 && !std::isfinite(hmax[e]))
        first = e;
    }
    if (options.diagnostics_path)
      write_diagnostics(*options.diagnostics_path, *space, hmax, gmax);
    std::string where;
    if (first >= 0)
    {
      mra::ElementKey const key = space->key(first);
      for (int m = 0; m < dim; ++m)
        where += (m ? "," : "") + std::to_string(key.level(m)) + ":" +
                 std::to_string(key.translation(m));
    }
    throw NumericalFailure("non-finite numerical Hamiltonian at element (" + where + ")");
  }
  HierCoeffField const b = transforms_.point_values_to_hier(hv);
  HierCoeffField out = transforms_.interp_to_alpert_volume(b, options.serial);
  out *= -1.0;
  return out;
}

} // namespace hjsg::ldg
