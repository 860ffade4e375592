#include "hjsg/bench/runner.hpp"

#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace hjsg::bench
{
GridMode parse_grid_mode(std::string const &s)
{
  if (s == "full")
    return GridMode::full;
  if (s == "sparse")
    return GridMode::sparse;
  if (s == "adaptive")
    return GridMode::adaptive;
  throw ConfigError("unknown mode '" + s + "' (expected full, sparse or adaptive)");
}

std::string to_string(GridMode mode)
{
  switch (mode)
  {
  case GridMode::full:
    return "full";
  case GridMode::sparse:
    return "sparse";
  case GridMode::adaptive:
    return "adaptive";
  }
  return "?";
}

RunConfig resolve(RunConfig cfg)
{
  auto const c = make_case(cfg.case_id, cfg.dim);
  if (cfg.k < 0 || cfg.k > alpert::max_degree)
    throw ConfigError("k must be in [0, " + std::to_string(alpert::max_degree) + "]");
  if (cfg.M < 0)
    cfg.M = std::max(c.default_M(cfg.k), 1);
  if (cfg.M < cfg.k)
    throw ConfigError("interpolation degree M must be at least k");
  if (cfg.M < 1 || cfg.M > 5)
    throw ConfigError("interpolation degree M must be in [1, 5]");
  if (cfg.max_level < 1 || cfg.max_level > mra::level_cap)
    throw ConfigError("max level must be in [1, " + std::to_string(mra::level_cap) + "]");
  if (!(cfg.delta_factor > 0.0) || !std::isfinite(cfg.delta_factor))
    throw ConfigError("regularization width factor must be positive");
  if (cfg.t_final <= 0.0)
    cfg.t_final = c.table_time;
  time::TimeConfig{cfg.t_final, cfg.cfl, std::nullopt, std::nullopt}.validate();
  if (cfg.mode == GridMode::adaptive)
    adapt::AdaptConfig{cfg.eps, cfg.eta, cfg.max_level, false}.validate();
  return cfg;
}

ReferenceFunction reference_at(BenchmarkCase const &c, double t)
{
  switch (c.reference_kind)
  {
  case ReferenceKind::closed_form:
    return [c, t](std::span<double const> x) { return exact_solution(c, x, t); };
  case ReferenceKind::characteristics:
    return [c, t](std::span<double const> x) { return characteristics_reference(c, x, t); };
  case ReferenceKind::none:
    break;
  }
  return {};
}

RunOutcome run_case(RunConfig const &input, time::EvolveHooks const &hooks)
{
  RunOutcome out;
  out.config = resolve(input);
  RunConfig const &cfg = out.config;
  out.benchmark = make_case(cfg.case_id, cfg.dim);
  auto &c = out.benchmark;
  if (cfg.bc)
    c.bc = *cfg.bc;

  out.spec = c.hamiltonian;
  if (cfg.alpha_mode)
    out.spec.alpha_mode = *cfg.alpha_mode;
  double const h = std::ldexp(1.0, -cfg.max_level);
  if (cfg.regularize)
  {
    out.spec = ldg::regularize(out.spec, h);
    if (out.spec.needs_regularization)
      out.spec.delta = cfg.delta_factor * h;
  }

  ldg::DiscretizationConfig disc;
  disc.dim = cfg.dim;
  disc.k = cfg.k;
  disc.M = cfg.M;
  disc.max_level = cfg.max_level;
  disc.bc = c.bc;
  disc.table_cache_dir = cfg.table_cache_dir;
  out.op = std::make_shared<ldg::LdgOperator const>(disc);
  auto const &basis = out.op->alpert();

  alpert::ProjectionOptions popts;
  popts.breakpoints = c.breakpoints(0.0);
  std::optional<adapt::AdaptConfig> acfg;
  mra::HierCoeffField phi0;
  switch (cfg.mode)
  {
  case GridMode::full:
    phi0 = alpert::project_L2(c.initial, mra::AdaptiveSpace::full_grid(cfg.dim, cfg.max_level),
                              basis, popts);
    break;
  case GridMode::sparse:
    phi0 = alpert::project_L2(c.initial, mra::AdaptiveSpace::sparse_grid(cfg.dim, cfg.max_level),
                              basis, popts);
    break;
  case GridMode::adaptive:
    acfg = adapt::AdaptConfig{cfg.eps, cfg.eta, cfg.max_level, false};
    phi0 = adapt::adaptive_initial_projection(c.initial, cfg.dim, basis, *acfg, popts);
    break;
  }

  time::TimeConfig tcfg{cfg.t_final, cfg.cfl, std::nullopt, std::nullopt};
  time::EvolveHooks hk = hooks;
  hk.serial = hk.serial || cfg.serial;
  if (!hk.diagnostics_path)
    hk.diagnostics_path = cfg.diagnostics_path;
  auto res = time::evolve(phi0, *out.op, out.spec, tcfg, acfg, hk);
  out.phi = std::move(res.phi);
  out.t = res.t;
  out.steps = res.steps;
  out.dof = res.max_dof;
  out.trace = std::move(res.trace);

  if (cfg.compute_error)
    if (auto ref = reference_at(c, out.t))
    {
      ErrorOptions eopts;
      eopts.breakpoints = c.breakpoints(out.t);
      try
      {
        out.error = l2_error(out.phi, basis, ref, eopts);
      }
      catch (NumericalFailure const &)
      {
        // Past kink formation the characteristics reference is undefined.
        out.error.reset();
      }
    }
  return out;
}

std::vector<ConvergenceRow> sweep_eps(RunConfig const &base, std::vector<double> const &eps)
{
  std::vector<ConvergenceRow> rows;
  for (double e : eps)
  {
    RunConfig cfg = base;
    cfg.mode = GridMode::adaptive;
    cfg.eps = e;
    if (base.eta >= 0.0)
      cfg.eta = base.eta;
    auto const out = run_case(cfg);
    if (!out.error)
      throw ConfigError("sweep: case " + base.case_id + " has no reference at the final time");
    rows.push_back({e, static_cast<double>(out.dof), *out.error});
  }
  if (rows.size() >= 2)
    rates(rows, RateMode::by_eps);
  return rows;
}

std::vector<ConvergenceRow> sweep_levels(RunConfig const &base, int lo, int hi)
{
  if (lo < 1 || hi < lo)
    throw ConfigError("sweep: invalid level range");
  std::vector<ConvergenceRow> rows;
  for (int n = lo; n <= hi; ++n)
  {
    RunConfig cfg = base;
    cfg.max_level = n;
    auto const out = run_case(cfg);
    if (!out.error)
      throw ConfigError("sweep: case " + base.case_id + " has no reference at the final time");
    rows.push_back({static_cast<double>(n), static_cast<double>(out.dof), *out.error});
  }
  if (rows.size() >= 2)
    rates(rows, RateMode::by_N);
  return rows;
}

void write_solution_dump(std::string const &path, RunOutcome const &out, int points)
{
  if (points < 2)
    throw ConfigError("solution dump needs at least two points per direction");
  int const dim = out.phi.space()->dim();
  int const shown = std::min(dim, 2);
  auto const &basis = out.op->alpert();
  bool const controls = out.benchmark.id == "control";
  std::optional<ldg::Gradients> grads;
  if (controls)
    grads = out.op->reconstruct_gradients(out.phi);

  write_file_atomic(path, [&](std::ostream &os) {
    os.precision(std::numeric_limits<double>::max_digits10);
    std::vector<double> x(dim, 0.0);
    int const rows = shown == 2 ? points : 1;
    for (int a = 0; a < rows; ++a)
      for (int b = 0; b < points; ++b)
      {
        x[0] = static_cast<double>(b) / (points - 1);
        if (shown == 2)
        {
          x[0] = static_cast<double>(a) / (points - 1);
          x[1] = static_cast<double>(b) / (points - 1);
        }
        for (int m = 0; m < shown; ++m)
          os << x[m] << ' ';
        os << alpert::evaluate(out.phi, basis, x);
        if (controls)
        {
          double const pbar = 0.5 * (alpert::evaluate(grads->component(1, 1), basis, x) +
                                     alpert::evaluate(grads->component(1, 2), basis, x));
          os << ' ' << (pbar > 0.0 ? 1 : (pbar < 0.0 ? -1 : 0));
        }
        os << '\n';
      }
  });
}

std::vector<double> parse_eps_list(std::string const &s)
{
  auto const number = [&](std::string const &t) {
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
      v = std::stod(t, &pos);
    }
    catch (std::exception const &)
    {
      throw ConfigError("invalid threshold '" + t + "'");
    }
    if (pos != t.size() || !(v > 0.0))
      throw ConfigError("invalid threshold '" + t + "'");
    return v;
  };
  std::vector<double> out;
  auto const dots = s.find("..");
  if (dots != std::string::npos)
  {
    double const a = number(s.substr(0, dots));
    double const b = number(s.substr(dots + 2));
    int const steps = static_cast<int>(std::lround(std::log10(a / b)));
    if (steps < 0 || std::abs(std::log10(a / b) - steps) > 1e-9)
      throw ConfigError("threshold range must descend by whole decades");
    for (int i = 0; i <= steps; ++i)
      out.push_back(a / std::pow(10.0, i));
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(number(item));
  if (out.empty())
    throw ConfigError("empty threshold list");
  return out;
}

} // namespace hjsg::bench
