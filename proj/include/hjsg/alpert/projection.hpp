#pragma once

#include "hjsg/alpert/basis.hpp"
#include "hjsg/mra/coeff_field.hpp"

#include <functional>
#include <span>

namespace hjsg::alpert
{
using ScalarFunction = std::function<double(std::span<double const>)>;

struct ProjectionOptions
{
  // Pieces are split until they are no coarser than this level, so that
  // piecewise polynomials with breakpoints on that level integrate exactly.
  int min_piece_level = 0;
  // Gauss points per piece and dimension: k + 3 + ceil(width_scale * width),
  // capped at max_points.
  double width_scale = 16.0;
  int max_points = 32;
  // Extra breakpoints of the integrand, per dimension (a single list applies
  // to every dimension). Pieces are split there as well.
  std::vector<std::vector<double>> breakpoints;

  std::vector<double> const &breakpoints_for(int m) const
  {
    static std::vector<double> const none;
    if (breakpoints.empty())
      return none;
    return breakpoints.size() == 1 ? breakpoints[0] : breakpoints[m];
  }
};

// One-dimensional tensor factor used by the projection: quadrature points
// and weights on the support of a node and the node's basis values there.
struct NodeQuadrature
{
  std::vector<double> points;
  std::vector<double> weights;
  std::vector<double> values; // (k+1) x points, row-major
};

NodeQuadrature node_quadrature(AlpertBasis1D const &basis, Node n, ProjectionOptions const &opts,
                               std::vector<double> const &breakpoints = {});

// L2 projection of f onto the Alpert space of the given degree over space.
// Blocks of elements present in reuse (same degree) are copied instead of
// recomputed. Throws NumericalFailure if f returns a non-finite value.
mra::HierCoeffField project_L2(ScalarFunction const &f, mra::SpacePtr const &space,
                               AlpertBasis1D const &basis, ProjectionOptions const &opts = {},
                               mra::HierCoeffField const *reuse = nullptr);

// Pointwise reconstruction of an Alpert field (one-sided at breakpoints).
double evaluate(mra::HierCoeffField const &field, AlpertBasis1D const &basis,
                std::span<double const> x, Side s = Side::right);

} // namespace hjsg::alpert
