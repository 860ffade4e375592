#include "hjsg/interp/transform.hpp"

#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"
#include "hjsg/core/parallel.hpp"
#include "hjsg/interp/tables.hpp"
#include "hjsg/mra/unidirectional.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

namespace hjsg::interp
{
using mra::BasisFamily;
using mra::BlockShape;

namespace
{
void require_uniform(HierCoeffField const &u, int extent, char const *what)
{
  for (int e : u.shape().extents)
    if (e != extent)
      throw ConfigError(std::string(what) + ": block extent does not match the basis");
}

// Flat index within one component to per-dimension indices, last fastest.
void unflatten(int flat, int n, std::span<int> idx)
{
  for (int m = static_cast<int>(idx.size()) - 1; m >= 0; --m)
  {
    idx[m] = flat % n;
    flat /= n;
  }
}
} // namespace

InterpTransforms::InterpTransforms(int k, int M, int max_level)
    : alpert_(k), interp_(M), max_level_(max_level),
      point_eval_(build_point_eval_table(alpert_, interp_, max_level)),
      interp_eval_(build_interp_eval_table(interp_, max_level)),
      coupling_(build_coupling_table(alpert_, interp_, max_level))
{
  if (k > M)
    throw ConfigError("interpolation degree must be at least the DG degree");
}

HierCoeffField InterpTransforms::eval_at_points(HierCoeffField const &u, bool serial) const
{
  int const dim = u.space()->dim();
  if (u.family() == BasisFamily::alpert)
  {
    require_uniform(u, alpert_.size(), "eval_at_points");
    std::vector<mra::Operator1D const *> ops(dim, &point_eval_);
    return mra::apply_tensor(ops, u, BasisFamily::point_values, serial);
  }
  if (u.family() != BasisFamily::interpolatory)
    throw ConfigError("eval_at_points: field is already point values");
  require_uniform(u, interp_.size(), "eval_at_points");
  // Each output couples only to ancestors-or-self, so the passes stay on
  // the active set of a hierarchically complete space.
  HierCoeffField v = u;
  for (int m = 0; m < dim; ++m)
    v = serial ? mra::apply_dim_serial(interp_eval_, m, mra::CouplingPart::full, v,
                                       BasisFamily::point_values)
               : mra::apply_dim(interp_eval_, m, mra::CouplingPart::full, v,
                                BasisFamily::point_values);
  return v;
}

HierCoeffField InterpTransforms::point_values_to_hier(HierCoeffField const &values) const
{
  if (values.family() != BasisFamily::point_values)
    throw ConfigError("point_values_to_hier: expected a point-value field");
  require_uniform(values, interp_.size(), "point_values_to_hier");
  mra::AdaptiveSpace const &space = *values.space();
  if (space.max_level() > max_level_)
    throw ConfigError("point_values_to_hier: space finer than the tables");
  HierCoeffField b(values.space(), BasisFamily::interpolatory, values.shape());
  b.data() = values.data();
  int const n = interp_.size();
  int const dim = space.dim();
  // Inverse of each dimension's lower-triangular pass, in reverse order of
  // eval_at_points: forward substitution along fibers, coarse to fine.
  for (int m = dim - 1; m >= 0; --m)
  {
    int const outer = b.shape().outer(m);
    int const inner = b.shape().inner(m);
    auto const fibers = static_cast<std::ptrdiff_t>(space.fiber_count(m));
#pragma omp parallel num_threads(max_threads())
    {
      std::vector<int> position(interp_eval_.num_nodes(), -1);
#pragma omp for schedule(dynamic, 16)
      for (std::ptrdiff_t fid = 0; fid < fibers; ++fid)
      {
        auto const members = space.fiber_by_id(m, fid);
        for (std::size_t p = 0; p < members.size(); ++p)
          position[space.key(members[p]).node(m)] = static_cast<int>(p);
        // Members are sorted by node, so ancestors are finished first.
        for (std::uint32_t e : members)
        {
          Node const a = space.key(e).node(m);
          double *dst = b.block(e).data();
          for (Node anc = a; anc != 0;)
          {
            anc = mra::parent(anc);
            int const pos = position[anc];
            double const *blk = interp_eval_.block(a, anc);
            if (pos < 0 || blk == nullptr)
              continue;
            double const *src = b.block(members[pos]).data();
            for (int o = 0; o < outer; ++o)
              for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                {
                  double const w = blk[r * n + c];
                  if (w == 0.0)
                    continue;
                  double *drow = dst + (o * n + r) * inner;
                  double const *srow = src + (o * n + c) * inner;
                  for (int i = 0; i < inner; ++i)
                    drow[i] -= w * srow[i];
                }
          }
        }
        for (std::uint32_t e : members)
          position[space.key(e).node(m)] = -1;
      }
    }
  }
  return b;
}

HierCoeffField InterpTransforms::interp_to_alpert_volume(HierCoeffField const &b,
                                                         bool serial) const
{
  if (b.family() != BasisFamily::interpolatory)
    throw ConfigError("interp_to_alpert_volume: expected an interpolatory field");
  require_uniform(b, interp_.size(), "interp_to_alpert_volume");
  std::vector<mra::Operator1D const *> ops(b.space()->dim(), &coupling_);
  return mra::apply_tensor(ops, b, BasisFamily::alpert, serial);
}

HierCoeffField InterpTransforms::sample(PointFunction const &f, SpacePtr const &space) const
{
  int const dim = space->dim();
  int const n = interp_.size();
  HierCoeffField out(space, BasisFamily::point_values, n - 1);
  int const bs = out.block_size();
  auto const elements = static_cast<std::ptrdiff_t>(space->size());
  bool failed = false;
  ExceptionSink sink;
#pragma omp parallel num_threads(max_threads())
  {
    std::array<double, mra::max_dim> x{};
    std::array<Side, mra::max_dim> s{};
    std::array<int, mra::max_dim> idx{};
    std::vector<InterpPoint> pts(static_cast<std::size_t>(dim) * n);
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t e = 0; e < elements; ++e)
    {
      mra::ElementKey const key = space->key(e);
      for (int m = 0; m < dim; ++m)
        for (int i = 0; i < n; ++i)
          pts[m * n + i] = interp_.point(key.node(m), i);
      double *dst = out.block(e).data();
      for (int flat = 0; flat < bs; ++flat)
      {
        unflatten(flat, n, std::span<int>(idx.data(), dim));
        for (int m = 0; m < dim; ++m)
        {
          x[m] = pts[m * n + idx[m]].x;
          s[m] = pts[m * n + idx[m]].side;
        }
        dst[flat] = sink.value([&] {
          return f(std::span<double const>(x.data(), dim), std::span<Side const>(s.data(), dim));
        });
        if (!std::isfinite(dst[flat]))
        {
#pragma omp atomic write
          failed = true;
        }
      }
    }
  }
  sink.rethrow();
  if (failed)
    throw NumericalFailure("sampling produced a non-finite value");
  return out;
}

double InterpTransforms::evaluate_interpolant(HierCoeffField const &b, std::span<double const> x,
                                              Side side) const
{
  if (b.family() != BasisFamily::interpolatory || b.shape().ncomp != 1)
    throw ConfigError("evaluate_interpolant: expected a scalar interpolatory field");
  mra::AdaptiveSpace const &space = *b.space();
  int const dim = space.dim();
  int const n = interp_.size();
  std::array<Side, mra::max_dim> sides{};
  for (int m = 0; m < dim; ++m)
    sides[m] = x[m] <= 0.0 ? Side::right : (x[m] >= 1.0 ? Side::left : side);
  std::vector<double> vals(static_cast<std::size_t>(dim) * n);
  std::array<int, mra::max_dim> idx{};
  double sum = 0.0;
  for (std::size_t e = 0; e < space.size(); ++e)
  {
    mra::ElementKey const key = space.key(e);
    bool any = true;
    for (int m = 0; m < dim && any; ++m)
    {
      bool nonzero = false;
      for (int i = 0; i < n; ++i)
      {
        vals[m * n + i] = interp_.eval(key.node(m), i, x[m], sides[m]);
        nonzero = nonzero || vals[m * n + i] != 0.0;
      }
      any = nonzero;
    }
    if (!any)
      continue;
    auto const blk = b.block(e);
    for (int flat = 0; flat < b.block_size(); ++flat)
    {
      unflatten(flat, n, std::span<int>(idx.data(), dim));
      double w = blk[flat];
      for (int m = 0; m < dim && w != 0.0; ++m)
        w *= vals[m * n + idx[m]];
      sum += w;
    }
  }
  return sum;
}

void for_each_point(mra::AdaptiveSpace const &space, InterpBasis1D const &basis,
                    std::function<void(std::size_t, int, std::span<double const>,
                                       std::span<Side const>)> const &visit)
{
  int const dim = space.dim();
  int const n = basis.size();
  int bs = 1;
  for (int m = 0; m < dim; ++m)
    bs *= n;
  std::array<double, mra::max_dim> x{};
  std::array<Side, mra::max_dim> s{};
  std::array<int, mra::max_dim> idx{};
  for (std::size_t e = 0; e < space.size(); ++e)
  {
    mra::ElementKey const key = space.key(e);
    for (int flat = 0; flat < bs; ++flat)
    {
      unflatten(flat, n, std::span<int>(idx.data(), dim));
      for (int m = 0; m < dim; ++m)
      {
        InterpPoint const p = basis.point(key.node(m), idx[m]);
        x[m] = p.x;
        s[m] = p.side;
      }
      visit(e, flat, std::span<double const>(x.data(), dim), std::span<Side const>(s.data(), dim));
    }
  }
}

void write_point_table_csv(std::ostream &out, HierCoeffField const &values,
                           InterpBasis1D const &basis)
{
  if (values.family() != BasisFamily::point_values || values.shape().ncomp != 1)
    throw ConfigError("write_point_table_csv: expected a scalar point-value field");
  require_uniform(values, basis.size(), "write_point_table_csv");
  int const dim = values.space()->dim();
  for (int m = 0; m < dim; ++m)
    out << "x" << m + 1 << ',';
  for (int m = 0; m < dim; ++m)
    out << "side" << m + 1 << ',';
  out << "value\n" << std::setprecision(17);
  for_each_point(*values.space(), basis,
                 [&](std::size_t e, int flat, std::span<double const> x, std::span<Side const> s) {
                   for (double xi : x)
                     out << xi << ',';
                   for (Side si : s)
                     out << (si == Side::left ? 'L' : 'R') << ',';
                   out << values.block(e)[flat] << '\n';
                 });
}

void write_point_table_csv(std::filesystem::path const &path, HierCoeffField const &values,
                           InterpBasis1D const &basis)
{
  write_file_atomic(path.string(),
                    [&](std::ostream &out) { write_point_table_csv(out, values, basis); });
}

} // namespace hjsg::interp
