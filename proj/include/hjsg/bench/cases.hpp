#pragma once

#include "hjsg/alpert/flux_table.hpp"
#include "hjsg/ldg/hamiltonian.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hjsg::bench
{
using SpaceTimeFunction = std::function<double(std::span<double const> x, double t)>;

enum class ReferenceKind
{
  closed_form,
  characteristics,
  none
};

struct BenchmarkCase
{
  std::string id;
  int dim = 2;
  ldg::HamiltonianSpec hamiltonian;
  std::function<double(std::span<double const>)> initial;
  alpert::Boundary bc = alpert::Boundary::periodic;
  ReferenceKind reference_kind = ReferenceKind::none;
  SpaceTimeFunction reference; // empty when reference_kind is none
  int m_offset = 0;            // default M = k + m_offset
  double table_time = 0.0;     // final time of the convergence tables
  double plot_time = 0.0;      // final time of the solution plots
  // Solution depends on the sum of the coordinates only.
  bool reduces_to_1d = false;

  int default_M(int k) const { return k + m_offset; }
  // Coordinates where the reference is not smooth at time t, per dimension
  // (one list, applied to every dimension).
  std::vector<std::vector<double>> breakpoints(double t) const;
};

std::vector<std::string> case_ids();

// Throws ConfigError for an unknown id or an unsupported dimension.
BenchmarkCase make_case(std::string const &id, int dim);

// Closed-form viscosity solution; throws ConfigError for other cases.
double exact_solution(BenchmarkCase const &c, std::span<double const> x, double t);

// Solution by characteristics in the smooth regime; throws ConfigError for
// cases without a characteristics reference and NumericalFailure when the
// characteristic map is not invertible at (x, t).
double characteristics_reference(BenchmarkCase const &c, std::span<double const> x, double t);

// The same for the 1D reduction psi(xi, t) of cases that depend on
// xi = sum of coordinates.
double reduced_reference(BenchmarkCase const &c, double xi, double t);

// Kink locations in xi of the 1D reduction at time t, in [0, 1), from a
// fine monotone finite-difference solution of the reduced problem.
std::vector<double> reduced_kinks(BenchmarkCase const &c, double t, int cells = 4096);

// Trace g of the radial initial data: (z^2 - r0^2) / (2 r0), r0 = 1/8.
double radial_profile(double z);

} // namespace hjsg::bench
