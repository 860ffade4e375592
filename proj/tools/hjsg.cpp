#include "hjsg/adapt/adaptivity.hpp"
#include "hjsg/bench/runner.hpp"
#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"
#include "hjsg/core/parallel.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace
{
using namespace hjsg;
using namespace hjsg::bench;

struct Flags
{
  RunConfig run;
  // Empty: adaptive when --eps is given, sparse otherwise.
  std::string mode;
  std::string eps = "1e-4";
  std::string bc;
  std::string alpha;
  int min_level = 3;
  std::string output;
  std::string dump_solution;
  std::string dump_active;
  std::string trace;
  std::string diagnostics;
  bool no_regularize = false;
  unsigned seed = 0;
};

std::string optional_number(std::optional<double> v)
{
  if (!v)
    return "";
  std::ostringstream os;
  os.precision(6);
  os << *v;
  return os.str();
}

std::string number(double v)
{
  return optional_number(std::isnan(v) ? std::nullopt : std::optional<double>(v));
}

RunConfig build_config(Flags const &f, bool sweeping)
{
  RunConfig cfg = f.run;
  cfg.mode = parse_grid_mode(f.mode);
  if (!sweeping)
  {
    auto const eps = parse_eps_list(f.eps);
    if (eps.size() != 1)
      throw ConfigError("run takes a single --eps value");
    cfg.eps = eps[0];
  }
  if (!f.bc.empty())
  {
    if (f.bc == "periodic")
      cfg.bc = alpert::Boundary::periodic;
    else if (f.bc == "outflow")
      cfg.bc = alpert::Boundary::outflow;
    else
      throw ConfigError("unknown boundary condition '" + f.bc + "'");
  }
  if (!f.alpha.empty())
  {
    if (f.alpha == "analytic")
      cfg.alpha_mode = ldg::AlphaMode::analytic;
    else if (f.alpha == "sampled")
      cfg.alpha_mode = ldg::AlphaMode::sampled;
    else
      throw ConfigError("unknown alpha mode '" + f.alpha + "'");
  }
  cfg.regularize = !f.no_regularize;
  if (!f.diagnostics.empty())
    cfg.diagnostics_path = f.diagnostics;
  return resolve(cfg);
}

int do_run(Flags const &f)
{
  RunConfig const cfg = build_config(f, false);
  auto const out = run_case(cfg);
  std::cout << "case=" << cfg.case_id << " d=" << cfg.dim << " k=" << cfg.k << " M=" << cfg.M
            << " mode=" << to_string(cfg.mode) << " N=" << cfg.max_level;
  if (cfg.mode == GridMode::adaptive)
    std::cout << " eps=" << cfg.eps;
  std::cout << " T=" << out.t << " steps=" << out.steps << " DoF=" << out.dof
            << " L2_error=" << (out.error ? optional_number(out.error) : "n/a") << '\n';

  if (!f.output.empty())
    write_file_atomic(f.output, [&](std::ostream &os) {
      os << "case,dim,k,M,mode,max_level,eps,t_final,steps,dof,error\n";
      os << cfg.case_id << ',' << cfg.dim << ',' << cfg.k << ',' << cfg.M << ','
         << to_string(cfg.mode) << ',' << cfg.max_level << ','
         << (cfg.mode == GridMode::adaptive ? number(cfg.eps) : "") << ',' << out.t << ','
         << out.steps << ',' << out.dof << ',' << optional_number(out.error) << '\n';
    });
  if (!f.dump_solution.empty())
    write_solution_dump(f.dump_solution, out);
  if (!f.dump_active.empty())
    adapt::write_active_set_csv(f.dump_active, out.phi);
  if (!f.trace.empty())
    time::write_trace_csv(f.trace, out.trace);
  return 0;
}

int do_sweep(Flags const &f)
{
  RunConfig const cfg = build_config(f, true);
  bool const adaptive = cfg.mode == GridMode::adaptive;
  auto const rows = adaptive ? sweep_eps(cfg, parse_eps_list(f.eps))
                             : sweep_levels(cfg, f.min_level, cfg.max_level);
  std::ostringstream table;
  table << (adaptive ? "eps,dof,error,r_eps,r_dof\n" : "N,dof,error,order\n");
  for (auto const &r : rows)
  {
    if (adaptive)
      table << number(r.control) << ',' << r.dof << ',' << number(r.error) << ','
            << number(r.r_eps) << ',' << number(r.r_dof) << '\n';
    else
      table << static_cast<int>(r.control) << ',' << r.dof << ',' << number(r.error) << ','
            << number(r.order) << '\n';
  }
  std::cout << table.str();
  if (!f.output.empty())
    write_file_atomic(f.output, [&](std::ostream &os) { os << table.str(); });
  return 0;
}

void add_options(CLI::App &app, Flags &f)
{
  app.add_option("--case", f.run.case_id, "burgers | cos | nonlinear2d | eikonal | hjb | control");
  app.add_option("--dim", f.run.dim, "spatial dimension");
  app.add_option("--k", f.run.k, "polynomial degree of the Alpert basis");
  app.add_option("--m", f.run.M, "interpolation degree (default: case default)");
  app.add_option("--max-level", f.run.max_level, "maximum mesh level N");
  app.add_option("--min-level", f.min_level, "first level of a fixed-grid sweep");
  app.add_option("--mode", f.mode, "full | sparse | adaptive (default: adaptive if --eps is set)");
  app.add_option("--eps", f.eps, "refinement threshold; sweeps accept a..b or a,b,c");
  app.add_option("--eta", f.run.eta, "coarsening threshold (default eps/10)");
  app.add_option("--cfl", f.run.cfl, "Courant number");
  app.add_option("--t-final", f.run.t_final, "final time (default: the case's table time)");
  app.add_option("--bc", f.bc, "periodic | outflow (default: case)");
  app.add_option("--alpha", f.alpha, "analytic | sampled dissipation constants");
  app.add_flag("--no-regularize", f.no_regularize, "use the unsmoothed Hamiltonian");
  app.add_option("--delta-factor", f.run.delta_factor, "smoothing width in units of h (default 2)");
  app.add_option("--output", f.output, "CSV result file");
  app.add_option("--dump-solution", f.dump_solution, "solution samples on a 129-point grid");
  app.add_option("--dump-active", f.dump_active, "active elements with indicators");
  app.add_option("--trace", f.trace, "per-step trace CSV");
  app.add_option("--diagnostics", f.diagnostics, "per-element CSV written on non-finite fluxes");
  app.add_option("--seed", f.seed, "seed for randomized checks (runs are deterministic)");
}
} // namespace

int main(int argc, char **argv)
{
  hjsg::configure_threads_from_env();
  CLI::App app{"Adaptive sparse-grid LDG solver for Hamilton-Jacobi equations"};
  app.set_config("--config", "", "key=value file mirroring the command-line flags");
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  add_options(app, flags);
  auto *run = app.add_subcommand("run", "solve one case and report DoF and L2 error");
  auto *sweep = app.add_subcommand("sweep", "convergence table over eps or levels");
  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForAllHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e);
    return 2;
  }
  if (flags.mode.empty())
    flags.mode = app.count("--eps") > 0 ? "adaptive" : "sparse";
  try
  {
    if (run->parsed())
      return do_run(flags);
    if (sweep->parsed())
      return do_sweep(flags);
  }
  catch (hjsg::ConfigError const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (hjsg::NumericalFailure const &e)
  {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
