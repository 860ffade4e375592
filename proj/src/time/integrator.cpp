#include "hjsg/time/integrator.hpp"

#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace hjsg::time
{
void TimeConfig::validate() const
{
  if (!(t_final > 0.0) || !std::isfinite(t_final))
    throw ConfigError("final time must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0))
    throw ConfigError("cfl must be in (0, 1]");
  if (cfl_level && *cfl_level < 0)
    throw ConfigError("CFL level must be non-negative");
  if (dt_override && !(*dt_override > 0.0))
    throw ConfigError("fixed time step must be positive");
}

HierCoeffField ssp_rk3_step(HierCoeffField const &phi, double dt, RhsFunction const &rhs,
                            HierCoeffField const *first)
{
  if (!(dt > 0.0))
    throw ConfigError("time step must be positive");
  HierCoeffField u1 = phi;
  u1.axpy(dt, first ? *first : rhs(phi));

  HierCoeffField u2 = u1;
  u2.axpy(dt, rhs(u1));
  u2.lincomb(0.25, 0.75, phi);

  HierCoeffField out = u2;
  out.axpy(dt, rhs(u2));
  out.lincomb(2.0 / 3.0, 1.0 / 3.0, phi);
  if (!out.all_finite())
    throw NumericalFailure("non-finite state after a Runge-Kutta step");
  return out;
}

double choose_dt(mra::AdaptiveSpace const &space, std::vector<double> const &alpha,
                 TimeConfig const &cfg, double t)
{
  double const h = std::ldexp(1.0, -(cfg.cfl_level ? *cfg.cfl_level : space.finest_level()));
  double const sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  double dt = cfg.dt_override ? *cfg.dt_override : (sum > 0.0 ? cfg.cfl * h / sum : cfg.cfl * h);
  double const remaining = cfg.t_final - t;
  // Absorb a final sliver below round-off into this step.
  if (dt >= remaining * (1.0 - 1e-12))
    dt = remaining;
  return dt;
}

EvolveResult evolve(HierCoeffField const &phi0, ldg::LdgOperator const &op,
                    ldg::HamiltonianSpec const &spec, TimeConfig const &time_cfg,
                    std::optional<adapt::AdaptConfig> const &adapt_cfg, EvolveHooks const &hooks)
{
  time_cfg.validate();
  TimeConfig tcfg = time_cfg;
  if (adapt_cfg)
  {
    adapt_cfg->validate();
    if (!tcfg.cfl_level)
      tcfg.cfl_level = adapt_cfg->max_level;
  }
  bool const fixed_alpha = spec.alpha_mode == ldg::AlphaMode::analytic &&
                           static_cast<int>(spec.alpha_bound.size()) == spec.dim;

  ldg::RhsOptions frozen;
  frozen.serial = hooks.serial;
  frozen.diagnostics_path = hooks.diagnostics_path;
  ldg::RhsOptions sampling = frozen;
  sampling.refresh_alpha = !fixed_alpha;

  EvolveResult res;
  res.phi = phi0;
  res.max_dof = adapt::dof(phi0);
  std::vector<double> alpha = fixed_alpha ? spec.alpha_bound : std::vector<double>{};

  while (res.t < time_cfg.t_final)
  {
    if (adapt_cfg)
      res.phi = adapt::refine(res.phi, *adapt_cfg).phi;

    HierCoeffField const first = op.rhs(res.phi, spec, alpha, sampling);
    double const dt = choose_dt(*res.phi.space(), alpha, tcfg, res.t);
    auto const rhs = [&](HierCoeffField const &u) { return op.rhs(u, spec, alpha, frozen); };
    res.phi = ssp_rk3_step(res.phi, dt, rhs, &first);
    res.t = res.t + dt >= time_cfg.t_final ? time_cfg.t_final : res.t + dt;
    ++res.steps;

    if (adapt_cfg)
      res.phi = adapt::coarsen(res.phi, *adapt_cfg).phi;

    StepRecord rec;
    rec.step = res.steps;
    rec.t = res.t;
    rec.dt = dt;
    rec.dof = adapt::dof(res.phi);
    rec.alpha_sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    if (hooks.error)
      rec.error = hooks.error(res.phi, res.t);
    res.max_dof = std::max(res.max_dof, rec.dof);
    res.trace.push_back(rec);
    if (hooks.on_step)
      hooks.on_step(rec, res.phi);
  }
  return res;
}

void write_trace_csv(std::string const &path, std::vector<StepRecord> const &trace)
{
  write_file_atomic(path, [&](std::ostream &os) {
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "t,dt,dof,alpha_sum,error\n";
    for (auto const &r : trace)
    {
      os << r.t << ',' << r.dt << ',' << r.dof << ',' << r.alpha_sum << ',';
      if (r.error)
        os << *r.error;
      os << '\n';
    }
  });
}

} // namespace hjsg::time
