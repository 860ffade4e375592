#pragma once

#include "hjsg/alpert/basis.hpp"
#include "hjsg/interp/basis.hpp"
#include "hjsg/mra/coeff_field.hpp"
#include "hjsg/mra/operator1d.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>

namespace hjsg::interp
{
using mra::HierCoeffField;
using mra::SpacePtr;

// Point-value fields use the point_values family: block entry i of element
// e is the value at the tensor point (point(e_0, i_0), ..., point(e_{d-1},
// i_{d-1})), each coordinate with its one-sided trace.
class InterpTransforms
{
public:
  InterpTransforms(int k, int M, int max_level);

  alpert::AlpertBasis1D const &alpert() const { return alpert_; }
  InterpBasis1D const &interp() const { return interp_; }
  int max_level() const { return max_level_; }

  mra::Operator1D const &point_eval_table() const { return point_eval_; }
  mra::Operator1D const &interp_eval_table() const { return interp_eval_; }
  mra::Operator1D const &coupling_table() const { return coupling_; }

  // Values at the interpolation points of every active element, from an
  // Alpert or interpolatory field (multi-component fields are handled per
  // component).
  HierCoeffField eval_at_points(HierCoeffField const &u, bool serial = false) const;

  // Hierarchical interpolatory coefficients whose interpolant matches all
  // supplied point values.
  HierCoeffField point_values_to_hier(HierCoeffField const &values) const;

  // Alpert coefficients of the L2 projection of the interpolant.
  HierCoeffField interp_to_alpert_volume(HierCoeffField const &b, bool serial = false) const;

  // Samples f at every interpolation point. The callback receives the
  // coordinates and the per-dimension one-sided traces.
  using PointFunction = std::function<double(std::span<double const>, std::span<Side const>)>;
  HierCoeffField sample(PointFunction const &f, SpacePtr const &space) const;

  // Interpolant evaluated at an arbitrary point.
  double evaluate_interpolant(HierCoeffField const &b, std::span<double const> x,
                              Side side = Side::right) const;

private:
  alpert::AlpertBasis1D alpert_;
  InterpBasis1D interp_;
  int max_level_;
  mra::Operator1D point_eval_;
  mra::Operator1D interp_eval_;
  mra::Operator1D coupling_;
};

// Calls visit(e, flat index, coordinates, sides) for every interpolation
// point of every active element. Serial, in element order.
void for_each_point(mra::AdaptiveSpace const &space, InterpBasis1D const &basis,
                    std::function<void(std::size_t, int, std::span<double const>,
                                       std::span<Side const>)> const &visit);

// CSV dump of a point-value field: x_1..x_d, side_1..side_d (L or R), value.
void write_point_table_csv(std::ostream &out, HierCoeffField const &values,
                           InterpBasis1D const &basis);
void write_point_table_csv(std::filesystem::path const &path, HierCoeffField const &values,
                           InterpBasis1D const &basis);

} // namespace hjsg::interp
