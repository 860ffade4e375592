#include "hjsg/interp/tables.hpp"

#include "hjsg/core/error.hpp"
#include "hjsg/core/quadrature.hpp"

#include <vector>

namespace hjsg::interp
{
namespace
{
bool nested(Node a, Node b) { return mra::is_ancestor_or_self(a, b) || mra::is_ancestor_or_self(b, a); }

void check_level(int max_level)
{
  if (max_level < 0 || max_level > mra::level_cap)
    throw ConfigError("interpolation tables: max level out of range");
}
} // namespace

mra::Operator1D build_point_eval_table(alpert::AlpertBasis1D const &alpert,
                                       InterpBasis1D const &interp, int max_level)
{
  check_level(max_level);
  int const rows = interp.size();
  int const cols = alpert.size();
  mra::Operator1D op(max_level, rows, cols);
  std::vector<double> blk(static_cast<std::size_t>(rows) * cols);
  for (int a = 0; a < op.num_nodes(); ++a)
    for (int b = 0; b < op.num_nodes(); ++b)
    {
      if (!nested(a, b))
        continue;
      bool any = false;
      for (int i = 0; i < rows; ++i)
      {
        InterpPoint const p = interp.point(a, i);
        for (int j = 0; j < cols; ++j)
        {
          double const v = static_cast<double>(alpert.eval_ld(b, j, p.x, p.side));
          blk[i * cols + j] = v;
          any = any || v != 0.0;
        }
      }
      if (any)
        op.set_block(a, b, blk);
    }
  return op;
}

mra::Operator1D build_interp_eval_table(InterpBasis1D const &interp, int max_level)
{
  check_level(max_level);
  int const n = interp.size();
  mra::Operator1D op(max_level, n, n);
  std::vector<double> blk(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < op.num_nodes(); ++a)
    for (Node b = a;; b = mra::parent(b))
    {
      bool any = false;
      for (int i = 0; i < n; ++i)
      {
        InterpPoint const p = interp.point(a, i);
        for (int j = 0; j < n; ++j)
        {
          double const v = static_cast<double>(interp.eval_ld(b, j, p.x, p.side));
          blk[i * n + j] = v;
          any = any || v != 0.0;
        }
      }
      if (any)
        op.set_block(a, b, blk);
      if (b == 0)
        break;
    }
  return op;
}

mra::Operator1D build_coupling_table(alpert::AlpertBasis1D const &alpert,
                                     InterpBasis1D const &interp, int max_level)
{
  check_level(max_level);
  int const rows = alpert.size();
  int const cols = interp.size();
  int const npts = (alpert.degree() + interp.degree()) / 2 + 2;
  mra::Operator1D op(max_level, rows, cols);
  std::vector<long double> acc(static_cast<std::size_t>(rows) * cols);
  std::vector<double> blk(acc.size());
  for (int a = 0; a < op.num_nodes(); ++a)
    for (int b = 0; b < op.num_nodes(); ++b)
    {
      if (!nested(a, b))
        continue;
      Node const fine = mra::node_level(a) >= mra::node_level(b) ? a : b;
      std::fill(acc.begin(), acc.end(), 0.0L);
      for (auto const &piece : alpert::AlpertBasis1D::pieces(fine))
      {
        auto const rule = gauss_legendre_ld(npts, piece.lo, piece.hi);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        {
          long double const x = rule.nodes[q];
          for (int j = 0; j < cols; ++j)
          {
            long double const psi = interp.eval_ld(b, j, x, Side::right);
            if (psi == 0.0L)
              continue;
            for (int i = 0; i < rows; ++i)
              acc[i * cols + j] += rule.weights[q] * alpert.eval_ld(a, i, x) * psi;
          }
        }
      }
      bool any = false;
      for (std::size_t i = 0; i < acc.size(); ++i)
      {
        blk[i] = static_cast<double>(acc[i]);
        any = any || blk[i] != 0.0;
      }
      if (any)
        op.set_block(a, b, blk);
    }
  op.prune(1e-15);
  return op;
}

} // namespace hjsg::interp
