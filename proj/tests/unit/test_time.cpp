#include "doctest.h"

#include "hjsg/adapt/adaptivity.hpp"
#include "hjsg/alpert/projection.hpp"
#include "hjsg/bench/cases.hpp"
#include "hjsg/bench/error.hpp"
#include "hjsg/core/error.hpp"
#include "hjsg/time/integrator.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

using namespace hjsg;
using namespace hjsg::time;
using ldg::HamiltonianSpec;
using mra::AdaptiveSpace;
using mra::BasisFamily;

namespace
{
double const two_pi = 2.0 * std::numbers::pi;

HamiltonianSpec linear(std::vector<double> c)
{
  HamiltonianSpec s;
  s.name = "linear";
  s.dim = static_cast<int>(c.size());
  s.H = [c](std::span<double const>, std::span<double const> q, double) {
    double t = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m)
      t += c[m] * q[m];
    return t;
  };
  for (double v : c)
    s.alpha_bound.push_back(std::abs(v));
  return s;
}

ldg::DiscretizationConfig disc(int dim, int k, int M, int max_level)
{
  ldg::DiscretizationConfig c;
  c.dim = dim;
  c.k = k;
  c.M = M;
  c.max_level = max_level;
  return c;
}

double max_diff(HierCoeffField const &a, HierCoeffField const &b)
{
  REQUIRE(a.data().size() == b.data().size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

TimeConfig until(double t_final, double cfl = 0.1)
{
  TimeConfig c;
  c.t_final = t_final;
  c.cfl = cfl;
  return c;
}
} // namespace

TEST_CASE("time config validation")
{
  CHECK_NOTHROW(until(0.1).validate());
  CHECK_THROWS_AS(until(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(until(0.1, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(until(0.1, 1.5).validate(), ConfigError);
  auto c = until(0.1);
  c.dt_override = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("SSP-RK3 on linear test problems")
{
  auto space = AdaptiveSpace::root_only(1, 1);
  HierCoeffField u(space, BasisFamily::alpert, 0);
  u.block(0)[0] = 1.0;
  for (double lambda : {-3.0, -0.5, 0.7, 2.0})
    for (double dt : {0.01, 0.1, 0.4})
    {
      auto const rhs = [lambda](HierCoeffField const &v) {
        HierCoeffField r = v;
        r *= lambda;
        return r;
      };
      double const z = lambda * dt;
      double const taylor = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
      CHECK(std::abs(ssp_rk3_step(u, dt, rhs).block(0)[0] - taylor) <= 1e-14);
    }

  auto const zero = [](HierCoeffField const &v) {
    HierCoeffField r = v;
    r *= 0.0;
    return r;
  };
  CHECK(ssp_rk3_step(u, 0.3, zero).data() == u.data());

  auto const constant = [](HierCoeffField const &v) {
    HierCoeffField r = v;
    r.block(0)[0] = -2.5;
    return r;
  };
  CHECK(std::abs(ssp_rk3_step(u, 0.2, constant).block(0)[0] - (1.0 - 0.5)) <= 1e-15);

  auto const blowup = [](HierCoeffField const &v) {
    HierCoeffField r = v;
    r.block(0)[0] = std::numeric_limits<double>::infinity();
    return r;
  };
  CHECK_THROWS_AS(ssp_rk3_step(u, 0.1, blowup), NumericalFailure);
  CHECK_THROWS_AS(ssp_rk3_step(u, 0.0, zero), ConfigError);
}

TEST_CASE("step selection")
{
  auto const space = AdaptiveSpace::full_grid(1, 5);
  auto cfg = until(1.0);
  CHECK(choose_dt(*space, {1.5, 0.5}, cfg) == doctest::Approx(1.5625e-3).epsilon(1e-15));
  CHECK(choose_dt(*space, {0.0, 0.0}, cfg) == doctest::Approx(0.1 / 32.0).epsilon(1e-15));
  CHECK(choose_dt(*space, {1.0, 1.0}, cfg, 1.0 - 1e-4) == doctest::Approx(1e-4).epsilon(1e-9));
  cfg.dt_override = 0.3;
  CHECK(choose_dt(*space, {1.0}, cfg, 0.0) == 0.3);
  CHECK(choose_dt(*space, {1.0}, cfg, 0.8) == doctest::Approx(0.2).epsilon(1e-12));

  // Analytic Burgers bounds sum to d^2.
  auto const two = bench::make_case("burgers", 2).hamiltonian.alpha_bound;
  auto const three = bench::make_case("burgers", 3).hamiltonian.alpha_bound;
  double const dt2 = choose_dt(*space, two, until(1.0));
  double const dt3 = choose_dt(*space, three, until(1.0));
  CHECK(dt2 / dt3 == doctest::Approx(9.0 / 4.0).epsilon(1e-14));
}

TEST_CASE("constant states drift by -t H(0)")
{
  auto c = bench::make_case("cos", 2);
  ldg::LdgOperator const op(disc(2, 1, 2, 3));
  auto const space = AdaptiveSpace::sparse_grid(2, 3);
  HierCoeffField phi(space, BasisFamily::alpert, 1);
  phi.block(0)[0] = 0.4;
  std::vector<double> const zero(2, 0.0);
  double const h0 = c.hamiltonian.value(std::vector<double>(2, 0.5), zero);
  auto const res = evolve(phi, op, c.hamiltonian, until(0.05));
  CHECK(res.steps > 1);
  CHECK(res.t == 0.05);
  CHECK(std::abs(res.phi.block(0)[0] - (0.4 - 0.05 * h0)) <= 1e-12);
  for (std::size_t e = 1; e < res.phi.elements(); ++e)
    for (double v : res.phi.block(e))
      CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("evolve bookkeeping")
{
  auto const spec = linear({1.0, 1.0});
  ldg::LdgOperator const op(disc(2, 1, 1, 3));
  auto const space = AdaptiveSpace::full_grid(2, 3);
  auto const phi0 = alpert::project_L2(
      [](std::span<double const> x) { return std::sin(two_pi * x[0]) * std::cos(two_pi * x[1]); },
      space, op.alpert());

  SUBCASE("a final time below the first step gives one clipped step")
  {
    auto const res = evolve(phi0, op, spec, until(1e-5));
    CHECK(res.steps == 1);
    REQUIRE(res.trace.size() == 1);
    CHECK(res.trace[0].dt == doctest::Approx(1e-5).epsilon(1e-14));
    CHECK(res.t == 1e-5);
  }
  SUBCASE("trace records every step")
  {
    int calls = 0;
    EvolveHooks hooks;
    hooks.error = [](HierCoeffField const &, double t) { return 2.0 * t; };
    hooks.on_step = [&](StepRecord const &, HierCoeffField const &) { ++calls; };
    double const T = 0.01;
    auto const res = evolve(phi0, op, spec, until(T), std::nullopt, hooks);
    double const dt = 0.1 / 8.0 / 2.0;
    CHECK(res.steps == static_cast<int>(std::ceil(T / dt - 1e-9)));
    CHECK(calls == res.steps);
    REQUIRE(res.trace.size() == static_cast<std::size_t>(res.steps));
    for (auto const &r : res.trace)
    {
      CHECK(r.dof == space->size() * 4);
      CHECK(r.alpha_sum == 2.0);
      REQUIRE(r.error.has_value());
      CHECK(*r.error == doctest::Approx(2.0 * r.t));
    }
    CHECK(res.trace.back().t == T);
    CHECK(res.max_dof == space->size() * 4);

    auto const path = std::filesystem::temp_directory_path() / "hjsg_trace_test.csv";
    write_trace_csv(path.string(), res.trace);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,dt,dof,alpha_sum,error");
    int rows = 0;
    while (std::getline(in, line))
      ++rows;
    CHECK(rows == res.steps);
    std::filesystem::remove(path);
  }
  SUBCASE("infinite eps reproduces the fixed-space path")
  {
    adapt::AdaptConfig off;
    off.eps = std::numeric_limits<double>::infinity();
    off.max_level = 3;
    auto const fixed = evolve(phi0, op, spec, until(0.02));
    auto const adaptive = evolve(phi0, op, spec, until(0.02), off);
    CHECK(adaptive.steps == fixed.steps);
    CHECK(adaptive.phi.space()->size() == space->size());
    CHECK(max_diff(adaptive.phi, fixed.phi) <= 1e-12);
  }
  SUBCASE("linear Hamiltonians give a linear scheme")
  {
    auto const psi0 = alpert::project_L2(
        [](std::span<double const> x) { return std::exp(std::sin(two_pi * x[1])) * x[0]; }, space,
        op.alpert());
    HierCoeffField mix = phi0;
    mix.lincomb(2.0, -0.5, psi0);
    auto const a = evolve(phi0, op, spec, until(0.02)).phi;
    auto const b = evolve(psi0, op, spec, until(0.02)).phi;
    HierCoeffField expect = a;
    expect.lincomb(2.0, -0.5, b);
    auto const got = evolve(mix, op, spec, until(0.02)).phi;
    CHECK(max_diff(got, expect) <= 1e-12 * std::max(1.0, expect.max_abs()));
  }
}

TEST_CASE("temporal convergence order")
{
  auto c = bench::make_case("burgers", 2);
  ldg::LdgOperator const op(disc(2, 2, 3, 3));
  auto const space = AdaptiveSpace::sparse_grid(2, 3);
  auto const phi0 = alpert::project_L2(c.initial, space, op.alpert());
  std::vector<HierCoeffField> sols;
  for (double dt : {4e-3, 2e-3, 1e-3})
  {
    auto cfg = until(0.016);
    cfg.dt_override = dt;
    sols.push_back(evolve(phi0, op, c.hamiltonian, cfg).phi);
  }
  double const d1 = max_diff(sols[0], sols[1]);
  double const d2 = max_diff(sols[1], sols[2]);
  double const order = std::log2(d1 / d2);
  MESSAGE("temporal order " << order);
  CHECK(order >= 2.5);
}

TEST_CASE("one-dimensional Burgers solve matches the characteristics reference")
{
  auto c = bench::make_case("burgers", 1);
  int const N = 10;
  ldg::LdgOperator const op(disc(1, 2, 3, N));
  auto const space = AdaptiveSpace::full_grid(1, N);
  auto const phi0 = alpert::project_L2(c.initial, space, op.alpert());
  double const T = 0.01;
  auto const res = evolve(phi0, op, c.hamiltonian, until(T));
  double const err = bench::l2_error(res.phi, op.alpert(), [&](std::span<double const> x) {
    return bench::characteristics_reference(c, x, T);
  });
  MESSAGE("N=10 error " << err << " after " << res.steps << " steps");
  CHECK(err <= 1e-6);
}

TEST_CASE("adaptive evolution stays complete and tracks DoF")
{
  auto c = bench::make_case("burgers", 2);
  ldg::LdgOperator const op(disc(2, 1, 1, 5));
  adapt::AdaptConfig cfg;
  cfg.eps = 1e-3;
  cfg.max_level = 5;
  auto const phi0 = adapt::adaptive_initial_projection(c.initial, 2, op.alpert(), cfg);
  std::size_t seen = adapt::dof(phi0);
  EvolveHooks hooks;
  hooks.on_step = [&](StepRecord const &r, HierCoeffField const &phi) {
    CHECK(phi.space()->is_hierarchically_complete());
    CHECK(r.dof == adapt::dof(phi));
    seen = std::max(seen, r.dof);
  };
  auto const res = evolve(phi0, op, c.hamiltonian, until(0.01), cfg, hooks);
  CHECK(res.max_dof == seen);
  CHECK(res.phi.all_finite());
}
