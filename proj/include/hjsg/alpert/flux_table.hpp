#pragma once

#include "hjsg/alpert/basis.hpp"
#include "hjsg/mra/operator1d.hpp"

#include <functional>
#include <string>

namespace hjsg::alpert
{
enum class Boundary
{
  periodic,
  outflow
};

char const *boundary_name(Boundary bc);
Boundary parse_boundary(std::string const &name);

// 1D LDG derivative operator for one-sided flux tau (1: trace from the lower
// side of each face, 2: from the upper side). Block (a, b) holds
//   -int v_b v_a' dx + sum over faces of v_a of flux_tau(v_b) [v_a],
// with [w] = w(x-) - w(x+). Periodic boundaries join 1 to 0; outflow takes
// the interior trace at both ends for either tau.
mra::Operator1D build_flux_deriv_table(int tau, int max_level, AlpertBasis1D const &basis,
                                       Boundary bc);

// Loads dir/name.bin if present and valid, otherwise builds the operator
// and stores it there. An empty dir disables caching.
mra::Operator1D cached_operator(std::string const &dir, std::string const &name,
                                std::function<mra::Operator1D()> const &build);

} // namespace hjsg::alpert
