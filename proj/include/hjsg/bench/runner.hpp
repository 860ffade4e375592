#pragma once

#include "hjsg/adapt/adaptivity.hpp"
#include "hjsg/bench/cases.hpp"
#include "hjsg/bench/error.hpp"
#include "hjsg/ldg/operator.hpp"
#include "hjsg/time/integrator.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hjsg::bench
{
enum class GridMode
{
  full,
  sparse,
  adaptive
};

GridMode parse_grid_mode(std::string const &s);
std::string to_string(GridMode mode);

struct RunConfig
{
  std::string case_id = "burgers";
  int dim = 2;
  int k = 1;
  int M = -1; // negative: the case default
  int max_level = 4;
  GridMode mode = GridMode::sparse;
  double eps = 1e-4;
  double eta = -1.0; // negative: eps / 10
  double cfl = 0.1;
  double t_final = -1.0; // non-positive: the case's table time
  std::optional<alpert::Boundary> bc;
  std::optional<ldg::AlphaMode> alpha_mode;
  // Smooth the Hamiltonian with delta = 2 * 2^-max_level when the case asks
  // for it.
  bool regularize = true;
  // Smoothing width in units of the finest mesh size.
  double delta_factor = 2.0;
  bool compute_error = true;
  bool serial = false;
  std::optional<std::filesystem::path> diagnostics_path;
  std::string table_cache_dir;
};

struct RunOutcome
{
  RunConfig config; // with defaults resolved
  BenchmarkCase benchmark;
  ldg::HamiltonianSpec spec; // after regularization
  std::shared_ptr<ldg::LdgOperator const> op;
  mra::HierCoeffField phi;
  double t = 0.0;
  int steps = 0;
  std::size_t dof = 0; // maximum active coefficients over the run
  std::optional<double> error;
  std::vector<time::StepRecord> trace;
};

// Resolves defaults and rejects invalid combinations with ConfigError
// (M < k, M outside [1, 5], k outside [0, 3], bad levels or thresholds).
RunConfig resolve(RunConfig cfg);

// Projects the initial data, evolves to the final time and measures the L2
// error against the case reference when one is available at that time.
RunOutcome run_case(RunConfig const &cfg, time::EvolveHooks const &hooks = {});

// Reference at time t as a function of x; empty for cases without one.
ReferenceFunction reference_at(BenchmarkCase const &c, double t);

// Adaptive runs over the given thresholds, with R_eps and R_DoF filled.
std::vector<ConvergenceRow> sweep_eps(RunConfig const &base, std::vector<double> const &eps);
// Fixed-grid runs over max levels lo..hi, with the order filled.
std::vector<ConvergenceRow> sweep_levels(RunConfig const &base, int lo, int hi);

// Whitespace-separated "x_1 .. x_p value" rows on a uniform grid with
// `points` samples in each of the first min(d, 2) coordinates; the others are
// held at 0. The control case adds sign(pbar_2) as a last column.
void write_solution_dump(std::string const &path, RunOutcome const &out, int points = 129);

// Parses "a..b" (decades from a to b inclusive) or a comma-separated list.
std::vector<double> parse_eps_list(std::string const &s);

} // namespace hjsg::bench
