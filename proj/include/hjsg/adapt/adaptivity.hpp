#pragma once

#include "hjsg/alpert/projection.hpp"
#include "hjsg/mra/coeff_field.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hjsg::adapt
{
using mra::HierCoeffField;

struct AdaptConfig
{
  double eps = 1e-4;
  // Coarsening threshold; negative means eps / 10, or no coarsening when
  // eps is infinite.
  double eta = -1.0;
  int max_level = 6;
  // Divide each indicator by the square root of its support measure before
  // thresholding.
  bool level_scaled = false;

  double coarsen_threshold() const;
  // Throws ConfigError unless 0 < eta < eps and max_level >= 1. eps may be
  // infinite (adaptivity disabled), in which case eta is unrestricted.
  void validate() const;
};

// Euclidean norm of the element's Alpert block, which equals the L2 norm of
// its contribution to the reconstruction.
double element_indicator(HierCoeffField const &phi, std::size_t e, bool level_scaled = false);
// Throws ConfigError when key is inactive.
double element_indicator(HierCoeffField const &phi, mra::ElementKey const &key,
                         bool level_scaled = false);
std::vector<double> indicators(HierCoeffField const &phi, bool level_scaled = false);

struct AdaptResult
{
  HierCoeffField phi;
  bool changed = false;
};

// Activates every child, in every dimension, of each element whose indicator
// exceeds eps and whose finest per-dimension level is below max_level, plus
// the ancestors needed for completeness. New elements get zero blocks.
AdaptResult refine(HierCoeffField const &phi, AdaptConfig const &cfg);

// Repeatedly removes leaves whose indicator is below eta. The root is kept.
AdaptResult coarsen(HierCoeffField const &phi, AdaptConfig const &cfg);

// Keys removed by coarsen, for diagnostics and tests.
std::vector<mra::ElementKey> coarsen_removed(HierCoeffField const &phi, AdaptConfig const &cfg);

// Projection of f on a space grown from the root by alternating projection
// and refinement, followed by one coarsening pass.
HierCoeffField adaptive_initial_projection(alpert::ScalarFunction const &f, int dim,
                                           alpert::AlpertBasis1D const &basis,
                                           AdaptConfig const &cfg,
                                           alpert::ProjectionOptions const &opts = {});

// Active Alpert coefficients: elements times (k+1)^d.
std::size_t dof(HierCoeffField const &phi);

// One row per element: l_1..l_d, j_1..j_d, indicator.
void write_active_set_csv(std::string const &path, HierCoeffField const &phi,
                          bool level_scaled = false);

} // namespace hjsg::adapt
