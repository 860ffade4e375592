#pragma once

#include "hjsg/mra/node.hpp"

#include <vector>

namespace hjsg::interp
{
using mra::Node;
using mra::Side;

inline constexpr int max_degree = 5;

// One-sided interpolation point. A point at a cell endpoint belongs to the
// cell on the side its trace comes from: right limits to the cell above,
// left limits to the cell below.
struct InterpPoint
{
  double x;
  Side side;
  bool operator==(InterpPoint const &) const = default;
};

// Interface point family of degree M: X_0 = {i / M}, nested under dyadic
// refinement, with cell endpoints among the points. The points carry the
// numerator over the denominator 2M so that set operations are exact.
class InterpBasis1D
{
public:
  explicit InterpBasis1D(int degree);

  int degree() const { return m_; }
  int size() const { return m_ + 1; }

  InterpPoint const &coarse_point(int i) const { return coarse_[i]; }
  // Level-1 detail point i and the half cell (0 or 1) supporting psi_i.
  InterpPoint const &detail_point(int i) const { return detail_[i]; }
  int detail_cell(int i) const { return detail_cell_[i]; }

  // Interpolation point i owned by node n.
  InterpPoint point(Node n, int i) const;

  // phi_i for level 0, psi^j_{i,n} otherwise; zero outside the (half-open,
  // side-dependent) support.
  double eval(Node n, int i, double x, Side s) const;
  long double eval_ld(Node n, int i, long double x, Side s) const;

  // Per-cell point sets of level n as sorted (numerator, side) pairs with
  // the common denominator 2M * 2^n. Used by nestedness checks.
  std::vector<std::pair<long long, Side>> level_points(int level) const;

private:
  long double lagrange(int cell, int node, long double t) const;

  int m_;
  std::vector<InterpPoint> coarse_;
  std::vector<InterpPoint> detail_;
  std::vector<int> detail_cell_;
  std::vector<int> detail_local_; // index of the point within its half cell
};

// Validates M and builds the family.
InterpBasis1D build_interface_points(int degree);

} // namespace hjsg::interp
