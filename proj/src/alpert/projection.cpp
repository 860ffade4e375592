#include "hjsg/alpert/projection.hpp"

#include "hjsg/core/error.hpp"
#include "hjsg/core/parallel.hpp"
#include "hjsg/core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hjsg::alpert
{
NodeQuadrature node_quadrature(AlpertBasis1D const &basis, Node n, ProjectionOptions const &opts,
                               std::vector<double> const &breakpoints)
{
  NodeQuadrature nq;
  int const k = basis.degree();
  for (Interval const &piece : AlpertBasis1D::pieces(n))
  {
    int const piece_level = std::max(0, -static_cast<int>(std::lround(std::log2(piece.width()))));
    int const splits = 1 << std::max(0, opts.min_piece_level - piece_level);
    double const h = piece.width() / splits;
    int const npts = std::min(
        opts.max_points, k + 3 + static_cast<int>(std::ceil(opts.width_scale * h)));
    for (int s = 0; s < splits; ++s)
    {
      double const lo = piece.lo + s * h;
      double const hi = piece.lo + (s + 1) * h;
      std::vector<double> cuts{lo};
      for (double b : breakpoints)
        if (b > lo && b < hi)
          cuts.push_back(b);
      std::sort(cuts.begin(), cuts.end());
      cuts.push_back(hi);
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
      {
        auto const rule = gauss_legendre(npts, cuts[c], cuts[c + 1]);
        nq.points.insert(nq.points.end(), rule.nodes.begin(), rule.nodes.end());
        nq.weights.insert(nq.weights.end(), rule.weights.begin(), rule.weights.end());
      }
    }
  }
  std::size_t const q = nq.points.size();
  nq.values.resize(static_cast<std::size_t>(k + 1) * q);
  for (int i = 0; i <= k; ++i)
    for (std::size_t p = 0; p < q; ++p)
      nq.values[i * q + p] = basis.eval(n, i, nq.points[p]);
  return nq;
}

namespace
{
// In-place contraction of axis m of a tensor with the given extents:
// t[o, r, i] = sum_q a[r, q] t_old[o, q, i].
void contract_axis(std::vector<double> &t, std::vector<int> &extents, int m,
                   std::vector<double> const &a, int rows, std::vector<double> &scratch)
{
  int outer = 1;
  for (int j = 0; j < m; ++j)
    outer *= extents[j];
  int inner = 1;
  for (std::size_t j = m + 1; j < extents.size(); ++j)
    inner *= extents[j];
  int const cols = extents[m];
  scratch.assign(static_cast<std::size_t>(outer) * rows * inner, 0.0);
  for (int o = 0; o < outer; ++o)
    for (int r = 0; r < rows; ++r)
    {
      double *dst = scratch.data() + (static_cast<std::size_t>(o) * rows + r) * inner;
      for (int c = 0; c < cols; ++c)
      {
        double const w = a[static_cast<std::size_t>(r) * cols + c];
        double const *src = t.data() + (static_cast<std::size_t>(o) * cols + c) * inner;
        for (int i = 0; i < inner; ++i)
          dst[i] += w * src[i];
      }
    }
  t.swap(scratch);
  extents[m] = rows;
}
} // namespace

mra::HierCoeffField project_L2(ScalarFunction const &f, mra::SpacePtr const &space,
                               AlpertBasis1D const &basis, ProjectionOptions const &opts,
                               mra::HierCoeffField const *reuse)
{
  int const dim = space->dim();
  int const n = basis.size();
  mra::HierCoeffField out(space, mra::BasisFamily::alpert, basis.degree());
  if (reuse != nullptr &&
      (reuse->family() != mra::BasisFamily::alpert || reuse->shape() != out.shape()))
    reuse = nullptr;

  // Per-node 1D factors, with the weights folded into the basis values.
  // Tables are shared across dimensions unless the breakpoints differ.
  int const nodes = mra::node_count(space->max_level());
  int const tables = opts.breakpoints.size() > 1 ? dim : 1;
  std::vector<std::vector<NodeQuadrature>> factor_sets(tables, std::vector<NodeQuadrature>(nodes));
  std::vector<std::vector<std::vector<double>>> weighted_sets(
      tables, std::vector<std::vector<double>>(nodes));
  for (int t = 0; t < tables; ++t)
    for (int node = 0; node < nodes; ++node)
    {
      auto &nq = factor_sets[t][node];
      nq = node_quadrature(basis, static_cast<Node>(node), opts, opts.breakpoints_for(t));
      std::size_t const q = nq.points.size();
      auto &w = weighted_sets[t][node];
      w.resize(n * q);
      for (int i = 0; i < n; ++i)
        for (std::size_t p = 0; p < q; ++p)
          w[i * q + p] = nq.values[i * q + p] * nq.weights[p];
    }
  auto factor = [&](int m, Node node) -> NodeQuadrature const & {
    return factor_sets[tables == 1 ? 0 : m][node];
  };
  auto weighted = [&](int m, Node node) -> std::vector<double> const & {
    return weighted_sets[tables == 1 ? 0 : m][node];
  };

  auto const count = static_cast<std::ptrdiff_t>(space->size());
  bool failed = false;
  std::size_t failed_element = 0;
  ExceptionSink sink;

#pragma omp parallel num_threads(max_threads())
  {
    std::vector<double> values;
    std::vector<double> scratch;
    std::vector<int> extents(dim);
    std::vector<double> x(dim);
    std::vector<int> idx(dim);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t e = 0; e < count; ++e)
    {
      mra::ElementKey const key = space->key(e);
      if (reuse != nullptr)
      {
        std::ptrdiff_t const src = reuse->space()->find(key);
        if (src >= 0)
        {
          auto from = reuse->block(static_cast<std::size_t>(src));
          std::copy(from.begin(), from.end(), out.block(e).begin());
          continue;
        }
      }
      std::size_t total = 1;
      for (int m = 0; m < dim; ++m)
      {
        extents[m] = static_cast<int>(factor(m, key.node(m)).points.size());
        total *= extents[m];
      }
      values.resize(total);
      std::fill(idx.begin(), idx.end(), 0);
      bool finite = true;
      for (std::size_t p = 0; p < total; ++p)
      {
        for (int m = 0; m < dim; ++m)
          x[m] = factor(m, key.node(m)).points[idx[m]];
        double const v = sink.value([&] { return f(x); });
        finite = finite && std::isfinite(v);
        values[p] = v;
        for (int m = dim - 1; m >= 0; --m)
        {
          if (++idx[m] < extents[m])
            break;
          idx[m] = 0;
        }
      }
      if (!finite)
      {
#pragma omp critical(hjsg_projection_failure)
        {
          if (!failed || static_cast<std::size_t>(e) < failed_element)
            failed_element = static_cast<std::size_t>(e);
          failed = true;
        }
        continue;
      }
      for (int m = dim - 1; m >= 0; --m)
        contract_axis(values, extents, m, weighted(m, key.node(m)), n, scratch);
      std::copy(values.begin(), values.end(), out.block(e).begin());
    }
  }
  sink.rethrow();
  if (failed)
    throw NumericalFailure("project_L2: non-finite function value on element " +
                           std::to_string(failed_element));
  return out;
}

double evaluate(mra::HierCoeffField const &field, AlpertBasis1D const &basis,
                std::span<double const> x, Side s)
{
  auto const &space = *field.space();
  int const dim = space.dim();
  int const n = basis.size();
  int const levels = space.max_level() + 1;
  // Basis values of every node on the containing chain, per dimension.
  std::vector<std::vector<Node>> chain(dim);
  std::vector<std::vector<double>> vals(dim);
  for (int m = 0; m < dim; ++m)
  {
    // The domain ends only have an inward trace.
    Side const sm = x[m] <= 0.0 ? Side::right : (x[m] >= 1.0 ? Side::left : s);
    for (int l = 0; l < levels; ++l)
    {
      Node const node = mra::node_containing(x[m], sm, l);
      chain[m].push_back(node);
      for (int i = 0; i < n; ++i)
        vals[m].push_back(basis.eval(node, i, x[m], sm));
    }
  }
  double sum = 0.0;
  std::vector<int> lv(dim, 0);
  std::vector<Node> nodes(dim);
  while (true)
  {
    for (int m = 0; m < dim; ++m)
      nodes[m] = chain[m][lv[m]];
    std::ptrdiff_t const e = space.find(mra::ElementKey::from_nodes(nodes));
    if (e >= 0)
    {
      auto blk = field.block(static_cast<std::size_t>(e));
      int const bs = field.block_size();
      std::vector<int> idx(dim, 0);
      for (int flat = 0; flat < bs; ++flat)
      {
        double w = blk[flat];
        for (int m = 0; m < dim && w != 0.0; ++m)
          w *= vals[m][lv[m] * n + idx[m]];
        sum += w;
        for (int m = dim - 1; m >= 0; --m)
        {
          if (++idx[m] < n)
            break;
          idx[m] = 0;
        }
      }
    }
    int m = dim - 1;
    for (; m >= 0; --m)
    {
      if (++lv[m] < levels)
        break;
      lv[m] = 0;
    }
    if (m < 0)
      break;
  }
  return sum;
}

} // namespace hjsg::alpert
