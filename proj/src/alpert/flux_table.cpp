#include "hjsg/alpert/flux_table.hpp"

#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"
#include "hjsg/core/quadrature.hpp"

#include <filesystem>
#include <fstream>

namespace hjsg::alpert
{
using mra::Node;

char const *boundary_name(Boundary bc)
{
  return bc == Boundary::periodic ? "periodic" : "outflow";
}

Boundary parse_boundary(std::string const &name)
{
  if (name == "periodic")
    return Boundary::periodic;
  if (name == "outflow")
    return Boundary::outflow;
  throw ConfigError("unknown boundary condition '" + name + "'");
}

namespace
{
bool closed_overlap(Interval a, Interval b) { return a.lo <= b.hi && b.lo <= a.hi; }

std::vector<double> interior_breakpoints(Node n)
{
  if (n == 0)
    return {};
  Interval const s = mra::node_support(n);
  std::vector<double> pts;
  if (s.lo > 0.0)
    pts.push_back(s.lo);
  pts.push_back(0.5 * (s.lo + s.hi));
  if (s.hi < 1.0)
    pts.push_back(s.hi);
  return pts;
}
} // namespace

mra::Operator1D build_flux_deriv_table(int tau, int max_level, AlpertBasis1D const &basis,
                                       Boundary bc)
{
  if (tau != 1 && tau != 2)
    throw ConfigError("build_flux_deriv_table: side must be 1 or 2");
  if (max_level < 0 || max_level > mra::level_cap)
    throw ConfigError("build_flux_deriv_table: max level out of range");
  int const n = basis.size();
  mra::Operator1D op(max_level, n, n);
  int const nodes = op.num_nodes();
  Side const flux_side = tau == 1 ? Side::left : Side::right;
  std::vector<long double> acc(static_cast<std::size_t>(n) * n);
  std::vector<double> blk(acc.size());

  for (int a = 0; a < nodes; ++a)
  {
    Interval const sa = mra::node_support(a);
    auto const faces = interior_breakpoints(a);
    bool const a_touches = sa.lo == 0.0 || sa.hi == 1.0;
    for (int b = 0; b < nodes; ++b)
    {
      Interval const sb = mra::node_support(b);
      bool const b_touches = sb.lo == 0.0 || sb.hi == 1.0;
      bool const overlap = closed_overlap(sa, sb);
      if (!overlap && !(bc == Boundary::periodic && a_touches && b_touches))
        continue;
      std::fill(acc.begin(), acc.end(), 0.0L);

      // Volume term over the pieces of the finer node, when nested.
      int const la = mra::node_level(a);
      int const lb = mra::node_level(b);
      Node const fine = la >= lb ? a : b;
      Node const coarse = la >= lb ? b : a;
      if (mra::is_ancestor_or_self(coarse, fine))
        for (Interval const &piece : AlpertBasis1D::pieces(fine))
        {
          auto const rule = gauss_legendre_ld(n + 1, piece.lo, piece.hi);
          for (std::size_t q = 0; q < rule.nodes.size(); ++q)
          {
            long double const x = rule.nodes[q];
            for (int ia = 0; ia < n; ++ia)
            {
              long double const da = basis.eval_derivative_ld(a, ia, x);
              for (int ib = 0; ib < n; ++ib)
                acc[ia * n + ib] -= rule.weights[q] * basis.eval_ld(b, ib, x) * da;
            }
          }
        }

      for (double xf : faces)
        for (int ia = 0; ia < n; ++ia)
        {
          long double const jump =
              basis.eval_ld(a, ia, xf, Side::left) - basis.eval_ld(a, ia, xf, Side::right);
          if (jump == 0.0L)
            continue;
          for (int ib = 0; ib < n; ++ib)
            acc[ia * n + ib] += basis.eval_ld(b, ib, xf, flux_side) * jump;
        }

      if (a_touches && b_touches)
        for (int ia = 0; ia < n; ++ia)
        {
          long double const a0 = basis.eval_ld(a, ia, 0.0L, Side::right);
          long double const a1 = basis.eval_ld(a, ia, 1.0L, Side::left);
          for (int ib = 0; ib < n; ++ib)
          {
            long double const b0 = basis.eval_ld(b, ib, 0.0L, Side::right);
            long double const b1 = basis.eval_ld(b, ib, 1.0L, Side::left);
            if (bc == Boundary::periodic)
              acc[ia * n + ib] += (tau == 1 ? b1 : b0) * (a1 - a0);
            else
              acc[ia * n + ib] += b1 * a1 - b0 * a0;
          }
        }

      for (std::size_t i = 0; i < acc.size(); ++i)
        blk[i] = static_cast<double>(acc[i]);
      op.set_block(a, b, blk);
    }
  }
  op.prune(1e-12);
  return op;
}

mra::Operator1D cached_operator(std::string const &dir, std::string const &name,
                                std::function<mra::Operator1D()> const &build)
{
  if (dir.empty())
    return build();
  namespace fs = std::filesystem;
  fs::path const path = fs::path(dir) / (name + ".bin");
  if (fs::exists(path))
  {
    try
    {
      std::ifstream in(path, std::ios::binary);
      return mra::Operator1D::load(in);
    }
    catch (std::exception const &)
    {
      // Stale or corrupt cache entry; rebuild below.
    }
  }
  mra::Operator1D op = build();
  fs::create_directories(dir);
  write_file_atomic(path.string(), [&](std::ostream &out) { op.save(out); }, true);
  return op;
}

} // namespace hjsg::alpert
