#pragma once

#include "hjsg/alpert/basis.hpp"
#include "hjsg/alpert/projection.hpp"
#include "hjsg/mra/coeff_field.hpp"

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace hjsg::bench
{
using ReferenceFunction = std::function<double(std::span<double const>)>;

enum class ErrorMethod
{
  automatic,
  quadrature, // tensor Gauss on the uniform grid of the finest active level
  split       // orthogonal split through the L2 projection of the reference
};

struct ErrorOptions
{
  ErrorMethod method = ErrorMethod::automatic;
  // Known kinks of the reference, per dimension (one list: all dimensions).
  std::vector<std::vector<double>> breakpoints;
  // Upper bound on cells times chain combinations for the quadrature path
  // under the automatic method.
  double quadrature_budget = 6e7;
  // Gauss points per cell and dimension for the quadrature path; 0 means k+3.
  int points_per_cell = 0;
};

// Tensor Gauss-Legendre with k+3 points per cell on the uniform grid at the
// finest active level.
double l2_error_quadrature(mra::HierCoeffField const &phi, alpert::AlpertBasis1D const &basis,
                           ReferenceFunction const &ref, int points_per_cell = 0);

// ||phi - ref||^2 = ||phi - P ref||^2 + ||ref||^2 - ||P ref||^2 with P the
// L2 projection onto phi's space, computed with the reference breakpoints.
double l2_error_split(mra::HierCoeffField const &phi, alpert::AlpertBasis1D const &basis,
                      ReferenceFunction const &ref, ErrorOptions const &opts = {});

double l2_error(mra::HierCoeffField const &phi, alpert::AlpertBasis1D const &basis,
                ReferenceFunction const &ref, ErrorOptions const &opts = {});

// ||f||^2 on [0,1]^d by tensor Gauss over a uniform grid refined at the
// given breakpoints.
double squared_norm(ReferenceFunction const &f, int dim,
                    std::vector<std::vector<double>> const &breakpoints = {});

struct ConvergenceRow
{
  double control = 0.0; // N or epsilon
  double dof = 0.0;
  double error = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();
  double r_eps = std::numeric_limits<double>::quiet_NaN();
  double r_dof = std::numeric_limits<double>::quiet_NaN();
};

enum class RateMode
{
  by_N,
  by_eps
};

// Fills order (by_N) or R_eps and R_DoF (by_eps) from consecutive rows.
// Throws ConfigError on fewer than two rows or non-positive errors.
void rates(std::vector<ConvergenceRow> &rows, RateMode mode);

} // namespace hjsg::bench
