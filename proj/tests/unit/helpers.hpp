#pragma once

#include "hjsg/mra/adaptive_space.hpp"
#include "hjsg/mra/coeff_field.hpp"
#include "hjsg/mra/operator1d.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <random>

namespace hjsg::test
{
using namespace hjsg::mra;

inline HierCoeffField random_field(SpacePtr space, BasisFamily family, BlockShape shape,
                                   std::mt19937 &rng)
{
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  HierCoeffField f(space, family, shape);
  for (double &v : f.data())
    v = dist(rng);
  return f;
}

// Hierarchically complete random set: random keys up to max_level, closed
// under parents.
inline SpacePtr random_space(int dim, int max_level, int count, std::mt19937 &rng)
{
  std::uniform_int_distribution<int> level(0, max_level);
  std::vector<ElementKey> keys;
  for (int c = 0; c < count; ++c)
  {
    std::vector<Node> nodes(dim);
    for (int m = 0; m < dim; ++m)
    {
      int const l = level(rng);
      std::uint32_t const span = l <= 1 ? 1u : (1u << (l - 1));
      nodes[m] = make_node(l, std::uniform_int_distribution<std::uint32_t>(0, span - 1)(rng));
    }
    keys.push_back(ElementKey::from_nodes(nodes));
  }
  return std::make_shared<AdaptiveSpace const>(dim, max_level, complete_hierarchy(dim, keys));
}

// Random table; keep(r, c) decides which node pairs get a block.
inline Operator1D random_operator(int max_level, int rows, int cols, std::mt19937 &rng,
                                  std::function<bool(Node, Node)> const &keep)
{
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Operator1D op(max_level, rows, cols);
  std::vector<double> blk(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < op.num_nodes(); ++r)
    for (int c = 0; c < op.num_nodes(); ++c)
      if (keep(r, c))
      {
        for (double &v : blk)
          v = dist(rng);
        op.set_block(r, c, blk);
      }
  return op;
}

// Flat index of entry (e, multi-index) for a field with a given shape; the
// layout matches HierCoeffField::data().
inline std::size_t flat_index(BlockShape const &shape, std::size_t e, int flat)
{
  return e * shape.size() + flat;
}

// Decodes a flat block position into (component, per-dimension indices).
inline std::vector<int> unflatten(BlockShape const &shape, int flat, int &comp)
{
  int const dim = shape.dim();
  std::vector<int> idx(dim);
  for (int m = dim - 1; m >= 0; --m)
  {
    idx[m] = flat % shape.extents[m];
    flat /= shape.extents[m];
  }
  comp = flat;
  return idx;
}

// Dense matrix of the restricted tensor operator ops[0] x ... x ops[d-1] on
// the active set, mapping fields of shape in to fields of shape out.
inline Eigen::MatrixXd dense_tensor(AdaptiveSpace const &space,
                                    std::vector<Operator1D const *> const &ops,
                                    BlockShape const &in, BlockShape const &out)
{
  std::size_t const n = space.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n * out.size(), n * in.size());
  int const dim = space.dim();
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t f = 0; f < n; ++f)
      for (int ro = 0; ro < out.size(); ++ro)
      {
        int co = 0;
        auto const io = unflatten(out, ro, co);
        for (int ri = 0; ri < in.size(); ++ri)
        {
          int ci = 0;
          auto const ii = unflatten(in, ri, ci);
          if (ci != co)
            continue;
          double v = 1.0;
          for (int m = 0; m < dim && v != 0.0; ++m)
            v *= ops[m]->entry(space.key(e).node(m), io[m], space.key(f).node(m), ii[m]);
          a(flat_index(out, e, ro), flat_index(in, f, ri)) = v;
        }
      }
  return a;
}

inline Eigen::VectorXd as_vector(HierCoeffField const &f)
{
  return Eigen::Map<Eigen::VectorXd const>(f.data().data(), static_cast<Eigen::Index>(f.data().size()));
}

} // namespace hjsg::test
