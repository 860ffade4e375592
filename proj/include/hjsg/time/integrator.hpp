#pragma once

#include "hjsg/adapt/adaptivity.hpp"
#include "hjsg/ldg/operator.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hjsg::time
{
using mra::HierCoeffField;

struct TimeConfig
{
  double t_final = 0.0;
  double cfl = 0.1;
  // Fixed step used instead of the CFL rule (still clipped at t_final).
  std::optional<double> dt_override;
  // Mesh level of the CFL rule; the finest active level when unset.
  std::optional<int> cfl_level;

  // Throws ConfigError unless t_final > 0, 0 < cfl <= 1 and any override is
  // positive.
  void validate() const;
};

using RhsFunction = std::function<HierCoeffField(HierCoeffField const &)>;

// Three-stage SSP Runge-Kutta step. first, when given, is rhs(phi) already
// evaluated. Throws NumericalFailure if the result is not finite.
HierCoeffField ssp_rk3_step(HierCoeffField const &phi, double dt, RhsFunction const &rhs,
                            HierCoeffField const *first = nullptr);

// cfl * 2^-L / sum(alpha) with L the finest active level (or cfg.cfl_level),
// or cfl * 2^-L when sum(alpha) is zero; clipped so that t + dt does not pass
// t_final.
double choose_dt(mra::AdaptiveSpace const &space, std::vector<double> const &alpha,
                 TimeConfig const &cfg, double t = 0.0);

struct StepRecord
{
  int step = 0;
  double t = 0.0;  // time after the step
  double dt = 0.0;
  std::size_t dof = 0; // active coefficients after the step
  double alpha_sum = 0.0;
  std::optional<double> error;
};

struct EvolveHooks
{
  // Error against a reference at time t; recorded in the trace when set.
  std::function<double(HierCoeffField const &, double t)> error;
  // Called after every step with the new state.
  std::function<void(StepRecord const &, HierCoeffField const &)> on_step;
  // Per-element diagnostics written when a non-finite flux appears.
  std::optional<std::filesystem::path> diagnostics_path;
  bool serial = false;
};

struct EvolveResult
{
  HierCoeffField phi;
  double t = 0.0;
  int steps = 0;
  std::size_t max_dof = 0; // maximum over the run, initial state included
  std::vector<StepRecord> trace;
};

// Advances phi0 to t_final. With an adaptivity config every step runs
// refine, step selection, the RK step and coarsening; without one the space
// stays fixed. Adaptive runs take the CFL mesh level from the adaptivity max
// level unless time_cfg sets one. alpha is taken from the analytic bound when the spec has one
// in analytic mode, otherwise from point values of the current state once per
// step and frozen across the stages.
EvolveResult evolve(HierCoeffField const &phi0, ldg::LdgOperator const &op,
                    ldg::HamiltonianSpec const &spec, TimeConfig const &time_cfg,
                    std::optional<adapt::AdaptConfig> const &adapt_cfg = std::nullopt,
                    EvolveHooks const &hooks = {});

// Columns t, dt, dof, alpha_sum, error (empty when not recorded).
void write_trace_csv(std::string const &path, std::vector<StepRecord> const &trace);

} // namespace hjsg::time
