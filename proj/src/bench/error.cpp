#include "hjsg/bench/error.hpp"

#include "hjsg/core/error.hpp"
#include "hjsg/core/parallel.hpp"
#include "hjsg/core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hjsg::bench
{
namespace
{
double chain_combinations(int dim, int level)
{
  return std::pow(2.0, static_cast<double>(level) * dim) * std::pow(level + 1.0, dim);
}

std::vector<double> partition(int cells, std::vector<double> const &extra)
{
  std::vector<double> cuts;
  for (int c = 0; c <= cells; ++c)
    cuts.push_back(static_cast<double>(c) / cells);
  for (double b : extra)
    if (b > 0.0 && b < 1.0)
      cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  return cuts;
}

std::vector<double> const &breakpoints_for(std::vector<std::vector<double>> const &bp, int m)
{
  static std::vector<double> const none;
  if (bp.empty())
    return none;
  return bp.size() == 1 ? bp[0] : bp[m];
}
} // namespace

double l2_error_quadrature(mra::HierCoeffField const &phi, alpert::AlpertBasis1D const &basis,
                           ReferenceFunction const &ref, int points_per_cell)
{
  mra::AdaptiveSpace const &space = *phi.space();
  int const dim = space.dim();
  int const L = space.finest_level();
  int const n = basis.size();
  int const q = points_per_cell > 0 ? points_per_cell : basis.degree() + 3;
  long long const cells1d = 1ll << L;
  auto const unit = gauss_legendre(q, 0.0, 1.0);

  // vals[(cell * (L+1) + l) * n * q + i * q + p] = v_{node(l, cell), i}(x_p).
  std::vector<double> vals(static_cast<std::size_t>(cells1d) * (L + 1) * n * q);
  std::vector<double> xs(static_cast<std::size_t>(cells1d) * q);
  std::vector<mra::Node> chain(static_cast<std::size_t>(cells1d) * (L + 1));
  double const h = 1.0 / static_cast<double>(cells1d);
  for (long long c = 0; c < cells1d; ++c)
  {
    for (int p = 0; p < q; ++p)
      xs[c * q + p] = (c + unit.nodes[p]) * h;
    for (int l = 0; l <= L; ++l)
    {
      mra::Node const node =
          l == 0 ? 0 : mra::make_node(l, l == 1 ? 0 : static_cast<std::uint32_t>(c >> (L - l + 1)));
      chain[c * (L + 1) + l] = node;
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < q; ++p)
          vals[((c * (L + 1) + l) * n + i) * q + p] = basis.eval(node, i, xs[c * q + p]);
    }
  }

  long long total_cells = 1;
  for (int m = 0; m < dim; ++m)
    total_cells *= cells1d;
  int qd = 1;
  for (int m = 0; m < dim; ++m)
    qd *= q;
  std::vector<double> partial(static_cast<std::size_t>(total_cells), 0.0);
  ExceptionSink sink;

#pragma omp parallel num_threads(max_threads())
  {
    std::vector<long long> cell(dim);
    std::vector<int> lv(dim);
    std::vector<mra::Node> nodes(dim);
    std::vector<double> local(qd), t1, t2;
    std::vector<double> x(dim);
    std::vector<int> idx(dim);
#pragma omp for schedule(dynamic, 32)
    for (long long flat = 0; flat < total_cells; ++flat)
    {
      long long rem = flat;
      for (int m = dim - 1; m >= 0; --m)
      {
        cell[m] = rem % cells1d;
        rem /= cells1d;
      }
      std::fill(local.begin(), local.end(), 0.0);
      std::fill(lv.begin(), lv.end(), 0);
      while (true)
      {
        for (int m = 0; m < dim; ++m)
          nodes[m] = chain[cell[m] * (L + 1) + lv[m]];
        std::ptrdiff_t const e = space.find(mra::ElementKey::from_nodes(nodes));
        if (e >= 0)
        {
          // Sum factorization: contract the block with each dimension's
          // basis values, last dimension first.
          auto const blk = phi.block(static_cast<std::size_t>(e));
          t1.assign(blk.begin(), blk.end());
          int inner = 1;
          int outer = 1;
          for (int m = 0; m < dim - 1; ++m)
            outer *= n;
          for (int m = dim - 1; m >= 0; --m)
          {
            double const *vm = &vals[(cell[m] * (L + 1) + lv[m]) * n * q];
            t2.assign(static_cast<std::size_t>(outer) * q * inner, 0.0);
            for (int o = 0; o < outer; ++o)
              for (int i = 0; i < n; ++i)
                for (int p = 0; p < q; ++p)
                {
                  double const w = vm[i * q + p];
                  double const *src = &t1[(static_cast<std::size_t>(o) * n + i) * inner];
                  double *dst = &t2[(static_cast<std::size_t>(o) * q + p) * inner];
                  for (int r = 0; r < inner; ++r)
                    dst[r] += w * src[r];
                }
            t1.swap(t2);
            inner *= q;
            if (m > 0)
              outer /= n;
          }
          for (int p = 0; p < qd; ++p)
            local[p] += t1[p];
        }
        int m = dim - 1;
        for (; m >= 0; --m)
        {
          if (++lv[m] <= L)
            break;
          lv[m] = 0;
        }
        if (m < 0)
          break;
      }
      double sum = 0.0;
      for (int p = 0; p < qd; ++p)
      {
        int r = p;
        double w = 1.0;
        for (int m = dim - 1; m >= 0; --m)
        {
          idx[m] = r % q;
          r /= q;
          x[m] = xs[cell[m] * q + idx[m]];
          w *= unit.weights[idx[m]] * h;
        }
        double const d = local[p] - sink.value([&] { return ref(x); });
        sum += w * d * d;
      }
      partial[flat] = sum;
    }
  }
  sink.rethrow();
  return std::sqrt(std::accumulate(partial.begin(), partial.end(), 0.0));
}

double squared_norm(ReferenceFunction const &f, int dim,
                    std::vector<std::vector<double>> const &breakpoints)
{
  int const base = dim <= 2 ? 16 : (dim == 3 ? 8 : 4);
  int const q = dim <= 3 ? 10 : 8;
  auto const unit = gauss_legendre(q, 0.0, 1.0);
  std::vector<std::vector<double>> pts(dim), wts(dim);
  for (int m = 0; m < dim; ++m)
  {
    auto const cuts = partition(base, breakpoints_for(breakpoints, m));
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
    {
      double const w = cuts[c + 1] - cuts[c];
      for (int p = 0; p < q; ++p)
      {
        pts[m].push_back(cuts[c] + w * unit.nodes[p]);
        wts[m].push_back(w * unit.weights[p]);
      }
    }
  }
  // Parallel over the first coordinate; per-slice sums keep the order fixed.
  auto const n0 = static_cast<std::ptrdiff_t>(pts[0].size());
  std::vector<double> partial(n0, 0.0);
  ExceptionSink sink;
#pragma omp parallel num_threads(max_threads())
  {
    std::vector<double> x(dim);
    std::vector<std::size_t> idx(dim);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t i0 = 0; i0 < n0; ++i0)
    {
      std::fill(idx.begin(), idx.end(), 0);
      idx[0] = static_cast<std::size_t>(i0);
      double sum = 0.0;
      while (true)
      {
        double w = 1.0;
        for (int m = 0; m < dim; ++m)
        {
          x[m] = pts[m][idx[m]];
          w *= wts[m][idx[m]];
        }
        double const v = sink.value([&] { return f(x); });
        sum += w * v * v;
        int m = dim - 1;
        for (; m >= 1; --m)
        {
          if (++idx[m] < pts[m].size())
            break;
          idx[m] = 0;
        }
        if (m < 1)
          break;
      }
      partial[i0] = sum;
    }
  }
  sink.rethrow();
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

double l2_error_split(mra::HierCoeffField const &phi, alpert::AlpertBasis1D const &basis,
                      ReferenceFunction const &ref, ErrorOptions const &opts)
{
  alpert::ProjectionOptions popts;
  popts.breakpoints = opts.breakpoints;
  auto const p = alpert::project_L2(ref, phi.space(), basis, popts);
  double diff = 0.0;
  double proj = 0.0;
  for (std::size_t i = 0; i < p.data().size(); ++i)
  {
    double const d = phi.data()[i] - p.data()[i];
    diff += d * d;
    proj += p.data()[i] * p.data()[i];
  }
  double const tail = squared_norm(ref, phi.space()->dim(), opts.breakpoints) - proj;
  return std::sqrt(diff + std::max(tail, 0.0));
}

double l2_error(mra::HierCoeffField const &phi, alpert::AlpertBasis1D const &basis,
                ReferenceFunction const &ref, ErrorOptions const &opts)
{
  if (phi.family() != mra::BasisFamily::alpert || phi.shape().ncomp != 1)
    throw ConfigError("l2_error: expected a scalar Alpert field");
  ErrorMethod method = opts.method;
  if (method == ErrorMethod::automatic)
    method = chain_combinations(phi.space()->dim(), phi.space()->finest_level()) <=
                     opts.quadrature_budget
                 ? ErrorMethod::quadrature
                 : ErrorMethod::split;
  return method == ErrorMethod::quadrature ? l2_error_quadrature(phi, basis, ref, opts.points_per_cell)
                                           : l2_error_split(phi, basis, ref, opts);
}

void rates(std::vector<ConvergenceRow> &rows, RateMode mode)
{
  if (rows.size() < 2)
    throw ConfigError("rates: need at least two rows");
  for (auto const &r : rows)
    if (!(r.error > 0.0))
      throw ConfigError("rates: errors must be positive");
  for (std::size_t l = 1; l < rows.size(); ++l)
  {
    auto const &prev = rows[l - 1];
    auto &cur = rows[l];
    double const ratio = std::log(prev.error / cur.error);
    if (mode == RateMode::by_N)
      cur.order = ratio / (std::log(2.0) * (cur.control - prev.control));
    else
    {
      cur.r_eps = ratio / std::log(prev.control / cur.control);
      cur.r_dof = ratio / std::log(cur.dof / prev.dof);
    }
  }
}

} // namespace hjsg::bench
