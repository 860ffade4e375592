#include "hjsg/mra/unidirectional.hpp"

#include "hjsg/core/error.hpp"
#include "hjsg/core/parallel.hpp"

#include <algorithm>
#include <string>

namespace hjsg::mra
{
namespace
{
void check_dim(Operator1D const &op, int m, HierCoeffField const &u)
{
  if (m < 0 || m >= u.space()->dim())
    throw ConfigError("unidirectional apply: dimension " + std::to_string(m) + " out of range");
  if (u.shape().extents[m] != op.cols())
    throw ConfigError("unidirectional apply: operator columns do not match block extent");
  if (op.max_level() < u.space()->max_level())
    throw ConfigError("unidirectional apply: operator table too shallow for the space");
}

BlockShape output_shape(Operator1D const &op, int m, HierCoeffField const &u)
{
  BlockShape shape = u.shape();
  shape.extents[m] = op.rows();
  return shape;
}

// out[o, r, i] += sum_c blk[r, c] in[o, c, i]
inline void accumulate_block(double const *blk, int rows, int cols, int outer, int inner,
                             double const *in, double *out)
{
  for (int o = 0; o < outer; ++o)
  {
    double const *src = in + static_cast<std::ptrdiff_t>(o) * cols * inner;
    double *dst = out + static_cast<std::ptrdiff_t>(o) * rows * inner;
    for (int r = 0; r < rows; ++r)
    {
      double *drow = dst + r * inner;
      for (int c = 0; c < cols; ++c)
      {
        double const a = blk[r * cols + c];
        if (a == 0.0)
          continue;
        double const *srow = src + c * inner;
        for (int i = 0; i < inner; ++i)
          drow[i] += a * srow[i];
      }
    }
  }
}
} // namespace

void apply_dim_add(Operator1D const &op, int m, CouplingPart part, HierCoeffField const &u,
                   HierCoeffField &out)
{
  check_dim(op, m, u);
  if (out.space() != u.space() || out.shape() != output_shape(op, m, u))
    throw ConfigError("apply_dim_add: output field has the wrong shape");
  AdaptiveSpace const &space = *u.space();
  int const rows = op.rows();
  int const cols = op.cols();
  int const outer = u.shape().outer(m);
  int const inner = u.shape().inner(m);
  auto const n = static_cast<std::ptrdiff_t>(space.size());

#pragma omp parallel for schedule(dynamic, 64) num_threads(max_threads())
  for (std::ptrdiff_t e = 0; e < n; ++e)
  {
    Node const ne = space.key(e).node(m);
    double *dst = out.block(e).data();
    for (std::uint32_t f : space.fiber(m, e))
    {
      Node const nf = space.key(f).node(m);
      double const *blk = op.block(ne, nf);
      if (blk == nullptr || !part_accepts(part, ne, nf))
        continue;
      accumulate_block(blk, rows, cols, outer, inner, u.block(f).data(), dst);
    }
  }
}

HierCoeffField apply_dim(Operator1D const &op, int m, CouplingPart part,
                         HierCoeffField const &u, BasisFamily out_family)
{
  check_dim(op, m, u);
  HierCoeffField out(u.space(), out_family, output_shape(op, m, u));
  apply_dim_add(op, m, part, u, out);
  return out;
}

HierCoeffField apply_dim_serial(Operator1D const &op, int m, CouplingPart part,
                                HierCoeffField const &u, BasisFamily out_family)
{
  check_dim(op, m, u);
  HierCoeffField out(u.space(), out_family, output_shape(op, m, u));
  AdaptiveSpace const &space = *u.space();
  int const dim = space.dim();
  int const outer = u.shape().outer(m);
  int const inner = u.shape().inner(m);
  for (std::size_t e = 0; e < space.size(); ++e)
  {
    ElementKey const ke = space.key(e);
    for (std::size_t f = 0; f < space.size(); ++f)
    {
      ElementKey const kf = space.key(f);
      bool same_fiber = true;
      for (int j = 0; j < dim && same_fiber; ++j)
        same_fiber = (j == m) || ke.node(j) == kf.node(j);
      if (!same_fiber || !part_accepts(part, ke.node(m), kf.node(m)))
        continue;
      double const *blk = op.block(ke.node(m), kf.node(m));
      if (blk == nullptr)
        continue;
      accumulate_block(blk, op.rows(), op.cols(), outer, inner, u.block(f).data(),
                       out.block(e).data());
    }
  }
  return out;
}

namespace
{
HierCoeffField tensor_from(std::span<Operator1D const *const> ops, int m,
                           HierCoeffField const &u, BasisFamily out_family, bool serial)
{
  int const dim = static_cast<int>(ops.size());
  auto pass = [&](int j, CouplingPart part, HierCoeffField const &in) {
    return serial ? apply_dim_serial(*ops[j], j, part, in, out_family)
                  : apply_dim(*ops[j], j, part, in, out_family);
  };
  if (m == dim - 1)
    return pass(m, CouplingPart::full, u);
  HierCoeffField first = tensor_from(ops, m + 1, pass(m, CouplingPart::coarsening, u),
                                     out_family, serial);
  HierCoeffField rest = tensor_from(ops, m + 1, u, out_family, serial);
  if (serial)
    first += apply_dim_serial(*ops[m], m, CouplingPart::refining, rest, out_family);
  else
    apply_dim_add(*ops[m], m, CouplingPart::refining, rest, first);
  return first;
}
} // namespace

HierCoeffField apply_tensor(std::span<Operator1D const *const> ops, HierCoeffField const &u,
                            BasisFamily out_family, bool serial)
{
  if (static_cast<int>(ops.size()) != u.space()->dim())
    throw ConfigError("apply_tensor: need one operator per dimension");
  return tensor_from(ops, 0, u, out_family, serial);
}

} // namespace hjsg::mra
