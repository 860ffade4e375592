#include "hjsg/interp/basis.hpp"

#include "hjsg/alpert/basis.hpp"
#include "hjsg/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hjsg::interp
{
namespace
{
Side endpoint_side(int i) { return i == 0 ? Side::right : Side::left; }

bool inside(long double x, Side s, long double lo, long double hi)
{
  return s == Side::right ? (lo <= x && x < hi) : (lo < x && x <= hi);
}
} // namespace

InterpBasis1D::InterpBasis1D(int degree) : m_(degree)
{
  if (degree < 1 || degree > max_degree)
    throw ConfigError("interpolation degree " + std::to_string(degree) + " outside [1, " +
                      std::to_string(max_degree) + "]");
  int const m = degree;
  // Numerators over 2M.
  std::vector<std::pair<int, Side>> coarse;
  for (int i = 0; i <= m; ++i)
  {
    coarse.emplace_back(2 * i, endpoint_side(i));
    coarse_.push_back({static_cast<double>(i) / m, endpoint_side(i)});
  }
  auto same_point = [](std::pair<int, Side> a, std::pair<int, Side> b, int denom) {
    if (a.first != b.first)
      return false;
    // Interior points are continuous; only endpoints need matching sides.
    bool const endpoint = a.first == 0 || a.first == denom || a.first * 2 == denom;
    return !endpoint || a.second == b.second;
  };
  for (int c = 0; c <= 1; ++c)
    for (int i = 0; i <= m; ++i)
    {
      std::pair<int, Side> const p{i + c * m, endpoint_side(i)};
      bool in_coarse = false;
      for (auto const &q : coarse)
        in_coarse = in_coarse || same_point(p, q, 2 * m);
      if (in_coarse)
        continue;
      detail_.push_back({static_cast<double>(p.first) / (2.0 * m), p.second});
      detail_cell_.push_back(c);
      detail_local_.push_back(i);
    }
  if (static_cast<int>(detail_.size()) != m + 1)
    throw ConfigError("interpolation points are not nested for degree " + std::to_string(m));
}

long double InterpBasis1D::lagrange(int cell, int node, long double t) const
{
  // cell < 0: nodes i / M on [0, 1]; otherwise nodes (i / M + cell) / 2.
  long double const scale = cell < 0 ? 1.0L : 0.5L;
  long double const shift = cell < 0 ? 0.0L : 0.5L * cell;
  auto abscissa = [&](int i) { return shift + scale * static_cast<long double>(i) / m_; };
  long double const xn = abscissa(node);
  long double v = 1.0L;
  for (int i = 0; i <= m_; ++i)
    if (i != node)
      v *= (t - abscissa(i)) / (xn - abscissa(i));
  return v;
}

InterpPoint InterpBasis1D::point(Node n, int i) const
{
  int const level = mra::node_level(n);
  if (level == 0)
    return coarse_[i];
  double const scale = std::ldexp(1.0, -(level - 1));
  return {(detail_[i].x + mra::node_translation(n)) * scale, detail_[i].side};
}

long double InterpBasis1D::eval_ld(Node n, int i, long double x, Side s) const
{
  int const level = mra::node_level(n);
  if (level == 0)
    return inside(x, s, 0.0L, 1.0L) ? lagrange(-1, i, x) : 0.0L;
  long double const scale = std::ldexp(1.0L, level - 1);
  long double const t = scale * x - static_cast<long double>(mra::node_translation(n));
  int const c = detail_cell_[i];
  if (!inside(t, s, 0.5L * c, 0.5L * (c + 1)))
    return 0.0L;
  return lagrange(c, detail_local_[i], t);
}

double InterpBasis1D::eval(Node n, int i, double x, Side s) const
{
  return static_cast<double>(eval_ld(n, i, x, s));
}

std::vector<std::pair<long long, Side>> InterpBasis1D::level_points(int level) const
{
  std::vector<std::pair<long long, Side>> pts;
  long long const cells = 1ll << level;
  for (long long c = 0; c < cells; ++c)
    for (int i = 0; i <= m_; ++i)
    {
      long long const num = 2 * (i + c * m_);
      // Interior points of a cell are continuous there; normalize their side.
      Side const s = (i == 0) ? Side::right : Side::left;
      pts.emplace_back(num, s);
    }
  std::sort(pts.begin(), pts.end());
  return pts;
}

InterpBasis1D build_interface_points(int degree) { return InterpBasis1D(degree); }

} // namespace hjsg::interp
