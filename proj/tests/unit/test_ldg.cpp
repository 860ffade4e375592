#include "doctest.h"

#include "helpers.hpp"
#include "support/dg_oracle.hpp"

#include "hjsg/alpert/projection.hpp"
#include "hjsg/bench/error.hpp"
#include "hjsg/core/error.hpp"
#include "hjsg/ldg/hamiltonian.hpp"
#include "hjsg/ldg/operator.hpp"
#include "hjsg/mra/unidirectional.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace hjsg;
using namespace hjsg::ldg;
using mra::AdaptiveSpace;
using mra::BasisFamily;
using mra::HierCoeffField;

namespace
{
double const two_pi = 2.0 * std::numbers::pi;

HamiltonianSpec half_square_of_sum(int dim, std::vector<double> alpha = {})
{
  HamiltonianSpec s;
  s.name = "half_square_of_sum";
  s.dim = dim;
  s.H = [](std::span<double const>, std::span<double const> q, double) {
    double t = 0.0;
    for (double v : q)
      t += v;
    return 0.5 * t * t;
  };
  s.alpha_bound = std::move(alpha);
  return s;
}

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

double max_abs_diff(HierCoeffField const &a, HierCoeffField const &b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

double max_abs(HierCoeffField const &a)
{
  double d = 0.0;
  for (double v : a.data())
    d = std::max(d, std::abs(v));
  return d;
}
} // namespace

TEST_CASE("Lax-Friedrichs flux is consistent")
{
  auto const spec = half_square_of_sum(3);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> x{0.1, 0.2, 0.3}, q(3), alpha{3.0, 3.0, 3.0};
  for (int trial = 0; trial < 50; ++trial)
  {
    for (double &v : q)
      v = u(rng);
    CHECK(lax_friedrichs_hamiltonian(spec, x, q, q, alpha) == spec.value(x, q));
  }
}

TEST_CASE("Lax-Friedrichs flux of a half square")
{
  HamiltonianSpec s;
  s.dim = 1;
  s.H = [](std::span<double const>, std::span<double const> q, double) { return 0.5 * q[0] * q[0]; };
  std::vector<double> x{0.5}, p1{2.0}, p2{-2.0}, alpha{2.0};
  // H(0) - (2/2)(-2 - 2)
  CHECK(lax_friedrichs_hamiltonian(s, x, p1, p2, alpha) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("Lax-Friedrichs flux of a linear Hamiltonian is upwind")
{
  std::vector<double> c{0.5, 1.0, 2.5};
  auto const spec = linear(c);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> x{0.0, 0.0, 0.0}, p1(3), p2(3);
  for (int trial = 0; trial < 50; ++trial)
  {
    double expect = 0.0;
    for (int m = 0; m < 3; ++m)
    {
      p1[m] = u(rng);
      p2[m] = u(rng);
      expect += c[m] * p1[m];
    }
    CHECK(lax_friedrichs_hamiltonian(spec, x, p1, p2, spec.alpha_bound) ==
          doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("non-finite Hamiltonian fails")
{
  HamiltonianSpec s;
  s.dim = 1;
  s.H = [](std::span<double const>, std::span<double const> q, double) { return std::log(q[0]); };
  std::vector<double> x{0.0}, p{-1.0}, alpha{1.0};
  CHECK_THROWS_AS(lax_friedrichs_hamiltonian(s, x, p, p, alpha), NumericalFailure);
}

TEST_CASE("smoothed norm is C1 across the switch")
{
  double const delta = 0.03;
  for (int dim = 1; dim <= 3; ++dim)
  {
    std::vector<double> dir(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    std::vector<double> in(dim), out(dim), g_in(dim), g_out(dim);
    double const eps = 1e-15;
    for (int m = 0; m < dim; ++m)
    {
      in[m] = dir[m] * (delta - eps);
      out[m] = dir[m] * (delta + eps);
    }
    std::vector<double> at(dim);
    for (int m = 0; m < dim; ++m)
      at[m] = dir[m] * delta;
    // Both branches give delta at the switch.
    CHECK(smooth_norm(at, delta) == doctest::Approx(delta).epsilon(1e-14));
    double const blend = delta * delta / (2.0 * delta) + 0.5 * delta;
    CHECK(std::abs(blend - delta) < 1e-15);
    CHECK(std::abs(smooth_norm(in, delta) - smooth_norm(out, delta)) < 1e-12);
    smooth_norm_gradient(in, delta, g_in);
    smooth_norm_gradient(out, delta, g_out);
    for (int m = 0; m < dim; ++m)
      CHECK(std::abs(g_in[m] - g_out[m]) < 1e-12);
  }
  CHECK(std::abs(smooth_abs(delta - 1e-13, delta) - smooth_abs(delta + 1e-13, delta)) < 1e-12);
  CHECK(std::abs(smooth_abs_derivative(delta - 1e-13, delta) -
                 smooth_abs_derivative(delta + 1e-13, delta)) < 1e-10);
  CHECK(std::abs(smooth_abs_derivative(-delta + 1e-13, delta) -
                 smooth_abs_derivative(-delta - 1e-13, delta)) < 1e-10);
}

TEST_CASE("smoothed norm values")
{
  double const delta = 0.05;
  std::vector<double> zero(2, 0.0);
  CHECK(smooth_norm(zero, delta) == doctest::Approx(delta / 2.0).epsilon(1e-15));
  CHECK(smooth_abs(0.0, delta) == doctest::Approx(delta / 2.0).epsilon(1e-15));
  std::vector<double> far{6.0 * delta, 8.0 * delta};
  CHECK(smooth_norm(far, delta) == 10.0 * delta);
  CHECK(smooth_abs(-10.0 * delta, delta) == 10.0 * delta);
  CHECK(smooth_norm(far, 0.0) == std::hypot(far[0], far[1]));
}

TEST_CASE("regularize sets delta from the mesh size")
{
  HamiltonianSpec s;
  s.dim = 2;
  s.H = [](std::span<double const>, std::span<double const> q, double d) { return smooth_norm(q, d); };
  CHECK(regularize(s, 1.0 / 64).delta == 0.0);
  s.needs_regularization = true;
  auto const r = regularize(s, 1.0 / 64);
  CHECK(r.delta == 2.0 / 64);
  std::vector<double> x{0, 0}, q{0, 0};
  CHECK(r.value(x, q) == doctest::Approx(1.0 / 64).epsilon(1e-15));
}

TEST_CASE("alpha estimation")
{
  auto const sampled_zero = [](auto const &f) {
    std::vector<double> x{0.3}, p{0.0};
    f(x, p, p);
  };
  SUBCASE("analytic bound takes precedence")
  {
    auto const spec = half_square_of_sum(2, {2.0, 2.0});
    auto const a = estimate_alpha(spec, [](auto const &) {});
    CHECK(a == std::vector<double>{2.0, 2.0});
  }
  SUBCASE("linear Hamiltonian")
  {
    auto spec = linear({-0.5, 3.0});
    spec.alpha_mode = AlphaMode::sampled;
    auto const a = estimate_alpha(spec, [](auto const &f) {
      std::vector<double> x{0.1, 0.2}, p1{1.0, -4.0}, p2{0.3, 7.0};
      f(x, p1, p2);
    });
    CHECK(a[0] == doctest::Approx(1.1 * 0.5).epsilon(1e-6));
    CHECK(a[1] == doctest::Approx(1.1 * 3.0).epsilon(1e-6));
  }
  SUBCASE("zero gradients hit the floor")
  {
    HamiltonianSpec s;
    s.dim = 1;
    s.H = [](std::span<double const>, std::span<double const> q, double) { return 0.5 * q[0] * q[0]; };
    s.alpha_mode = AlphaMode::sampled;
    auto const a = estimate_alpha(s, sampled_zero);
    CHECK(a[0] == 1e-12);
  }
  SUBCASE("sampled maximum over both sides and the mean")
  {
    HamiltonianSpec s;
    s.dim = 1;
    s.H = [](std::span<double const>, std::span<double const> q, double) { return 0.5 * q[0] * q[0]; };
    s.dH = [](std::span<double const>, std::span<double const> q, double, std::span<double> out) {
      out[0] = q[0];
    };
    s.alpha_mode = AlphaMode::sampled;
    auto const a = estimate_alpha(s, [](auto const &f) {
      std::vector<double> x{0.0}, p1{-3.0}, p2{1.0}, q1{0.5}, q2{0.5};
      f(x, p1, p2);
      f(x, q1, q2);
    });
    CHECK(a[0] == doctest::Approx(3.3).epsilon(1e-15));
  }
}

TEST_CASE("Lax-Friedrichs flux is monotone under sampled alpha")
{
  // H(q) = sin(q1) q2 + q1^2 / 2 has bounded partials on bounded sets.
  HamiltonianSpec s;
  s.dim = 2;
  s.H = [](std::span<double const>, std::span<double const> q, double) {
    return std::sin(q[0]) * q[1] + 0.5 * q[0] * q[0];
  };
  s.alpha_mode = AlphaMode::sampled;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> p1s(400, std::vector<double>(2)), p2s = p1s;
  for (auto &p : p1s)
    for (double &v : p)
      v = u(rng);
  for (auto &p : p2s)
    for (double &v : p)
      v = u(rng);
  std::vector<double> x{0.0, 0.0};
  // Sample a dense grid of the range so the estimate covers every point used.
  auto const alpha = estimate_alpha(s, [&](auto const &f) {
    for (int a = 0; a <= 40; ++a)
      for (int b = 0; b <= 40; ++b)
      {
        std::vector<double> q{-1.0 + a / 20.0, -1.0 + b / 20.0};
        f(x, q, q);
      }
  });
  double const h = 1e-3;
  for (std::size_t t = 0; t < p1s.size(); ++t)
  {
    auto p1 = p1s[t];
    auto p2 = p2s[t];
    for (int m = 0; m < 2; ++m)
    {
      if (p1[m] + h > 1.0 || p2[m] + h > 1.0)
        continue;
      double const base = lax_friedrichs_hamiltonian(s, x, p1, p2, alpha);
      auto p1u = p1;
      p1u[m] += h;
      auto p2u = p2;
      p2u[m] += h;
      CHECK(lax_friedrichs_hamiltonian(s, x, p1u, p2, alpha) >= base);
      CHECK(lax_friedrichs_hamiltonian(s, x, p1, p2u, alpha) <= base);
    }
  }
}

TEST_CASE("gradients of constants vanish")
{
  for (auto bc : {alpert::Boundary::periodic, alpert::Boundary::outflow})
    for (int k = 0; k <= 3; ++k)
    {
      DiscretizationConfig cfg{2, k, std::max(k, 1), 4, bc, ""};
      LdgOperator op(cfg);
      auto const space = AdaptiveSpace::sparse_grid(2, 4);
      HierCoeffField phi(space, BasisFamily::alpert, k);
      phi.block(0)[0] = 1.7;
      auto const g = op.reconstruct_gradients(phi);
      CHECK(max_abs(g.stacked) < 1e-13);
    }
}

TEST_CASE("gradient of a projected smooth function converges")
{
  // One-sided derivatives of an L2 projection converge at order max(k, 1).
  for (int k = 0; k <= 3; ++k)
  {
    std::vector<double> errs[2];
    for (int N = 4; N <= 6; ++N)
    {
      DiscretizationConfig cfg{1, k, std::max(k, 1), N, alpert::Boundary::periodic, ""};
      LdgOperator op(cfg);
      auto const space = AdaptiveSpace::full_grid(1, N);
      auto const phi = alpert::project_L2(
          [](std::span<double const> x) { return std::sin(two_pi * x[0]); }, space, op.alpert());
      auto const g = op.reconstruct_gradients(phi);
      for (int tau = 1; tau <= 2; ++tau)
        errs[tau - 1].push_back(bench::l2_error(g.component(0, tau), op.alpert(),
                                                [](std::span<double const> x) {
                                                  return two_pi * std::cos(two_pi * x[0]);
                                                }));
    }
    for (int tau = 0; tau < 2; ++tau)
    {
      double const order = std::log2(errs[tau][0] / errs[tau][2]) / 2.0;
      MESSAGE("k " << k << " tau " << tau + 1 << " order " << order);
      CHECK(order >= std::max(k, 1) - 0.05);
    }
  }
}

TEST_CASE("gradient of a continuous piecewise polynomial is exact")
{
  // x(1 - x) is continuous across the periodic wrap, so both one-sided
  // reconstructions equal its derivative.
  for (auto bc : {alpert::Boundary::periodic, alpert::Boundary::outflow})
    for (int k = 2; k <= 3; ++k)
    {
      DiscretizationConfig cfg{2, k, k, 4, bc, ""};
      LdgOperator op(cfg);
      auto const space = AdaptiveSpace::sparse_grid(2, 4);
      auto const phi = alpert::project_L2(
          [](std::span<double const> x) { return x[0] * (1.0 - x[0]) * (0.5 + x[1]); }, space,
          op.alpert());
      auto const d0 = alpert::project_L2(
          [](std::span<double const> x) { return (1.0 - 2.0 * x[0]) * (0.5 + x[1]); }, space,
          op.alpert());
      auto const g = op.reconstruct_gradients(phi);
      CHECK(max_abs_diff(g.component(0, 1), d0) < 1e-12);
      CHECK(max_abs_diff(g.component(0, 2), d0) < 1e-12);
      if (bc == alpert::Boundary::outflow)
      {
        auto const d1 = alpert::project_L2(
            [](std::span<double const> x) { return x[0] * (1.0 - x[0]); }, space, op.alpert());
        CHECK(max_abs_diff(g.component(1, 1), d1) < 1e-12);
        CHECK(max_abs_diff(g.component(1, 2), d1) < 1e-12);
      }
    }
}

TEST_CASE("gradient of one basis function matches the weak form")
{
  for (auto bc : {alpert::Boundary::periodic, alpert::Boundary::outflow})
    for (int k = 0; k <= 2; ++k)
    {
      int const N = 3;
      DiscretizationConfig cfg{2, k, std::max(k, 1), N, bc, ""};
      LdgOperator op(cfg);
      auto const space = AdaptiveSpace::sparse_grid(2, N);
      std::mt19937 rng(17 + k);
      for (int trial = 0; trial < 4; ++trial)
      {
        HierCoeffField phi(space, BasisFamily::alpert, k);
        std::size_t const e = std::uniform_int_distribution<std::size_t>(0, space->size() - 1)(rng);
        int const f = std::uniform_int_distribution<int>(0, phi.block_size() - 1)(rng);
        phi.block(e)[f] = 1.0;
        auto const g = op.reconstruct_gradients(phi);
        for (int m = 0; m < 2; ++m)
          for (int tau = 1; tau <= 2; ++tau)
          {
            auto const ref = oracle::weak_form_gradient(phi, op.alpert(), bc, m, tau);
            CHECK(max_abs_diff(g.component(m, tau), ref) < 1e-12);
          }
      }
    }
}

TEST_CASE("serial and parallel gradients agree")
{
  DiscretizationConfig cfg{3, 2, 2, 4, alpert::Boundary::periodic, ""};
  LdgOperator op(cfg);
  std::mt19937 rng(23);
  auto const space = AdaptiveSpace::sparse_grid(3, 4);
  auto const phi = test::random_field(space, BasisFamily::alpert,
                                      mra::BlockShape::uniform(3, 3), rng);
  auto const a = op.reconstruct_gradients(phi, false);
  auto const b = op.reconstruct_gradients(phi, true);
  CHECK(max_abs_diff(a.stacked, b.stacked) == 0.0);
  std::vector<double> alpha;
  auto const spec = half_square_of_sum(3, {3.0, 3.0, 3.0});
  RhsOptions serial;
  serial.serial = true;
  auto const rp = op.rhs(phi, spec, alpha);
  CHECK(max_abs_diff(rp, op.rhs(phi, spec, alpha, serial)) < 1e-13 * max_abs(rp));
}

TEST_CASE("right-hand side of a constant")
{
  HamiltonianSpec s;
  s.dim = 2;
  s.H = [](std::span<double const> x, std::span<double const> q, double) {
    return std::cos(q[0] + q[1] + 1.0) + 0.0 * x[0];
  };
  s.alpha_bound = {1.0, 1.0};
  for (int k = 0; k <= 3; ++k)
  {
    DiscretizationConfig cfg{2, k, k == 0 ? 1 : k, 4, alpert::Boundary::periodic, ""};
    LdgOperator op(cfg);
    auto const space = AdaptiveSpace::sparse_grid(2, 4);
    HierCoeffField phi(space, BasisFamily::alpert, k);
    phi.block(0)[0] = -0.4;
    std::vector<double> alpha;
    auto const r = op.rhs(phi, s, alpha);
    CHECK(r.block(0)[0] == doctest::Approx(-std::cos(1.0)).epsilon(1e-13));
    double rest = 0.0;
    for (std::size_t i = 1; i < r.data().size(); ++i)
      rest = std::max(rest, std::abs(r.data()[i]));
    CHECK(rest < 1e-13);
  }
}

TEST_CASE("linear Hamiltonian reproduces upwind DG on full grids")
{
  for (int dim = 1; dim <= 2; ++dim)
    for (int N = 1; N <= 3; ++N)
      for (int k = 0; k <= 2; ++k)
      {
        int const M = std::max(k, 1);
        DiscretizationConfig cfg{dim, k, M, N, alpert::Boundary::periodic, ""};
        LdgOperator op(cfg);
        auto const space = AdaptiveSpace::full_grid(dim, N);
        std::mt19937 rng(31 + 7 * N + k);
        auto const phi = test::random_field(space, BasisFamily::alpert,
                                            mra::BlockShape::uniform(dim, k + 1), rng);
        std::vector<double> c(dim, 1.0);
        auto const spec = linear(c);
        std::vector<double> alpha;
        auto const r = op.rhs(phi, spec, alpha);
        auto const ref = oracle::upwind_dg_rhs(phi, op.alpert(), c);
        CHECK(max_abs_diff(r, ref) < 1e-12);
      }
}

TEST_CASE("non-finite flux reports the element")
{
  DiscretizationConfig cfg{2, 1, 1, 3, alpert::Boundary::periodic, ""};
  LdgOperator op(cfg);
  auto const space = AdaptiveSpace::sparse_grid(2, 3);
  auto const phi = alpert::project_L2(
      [](std::span<double const> x) { return std::sin(two_pi * x[0]) / two_pi; }, space, op.alpert());
  HamiltonianSpec s;
  s.dim = 2;
  s.H = [](std::span<double const>, std::span<double const> q, double) { return std::log(q[0]); };
  s.alpha_bound = {1.0, 1.0};
  auto const dir = std::filesystem::temp_directory_path() / "hjsg_test_ldg";
  std::filesystem::create_directories(dir);
  RhsOptions opts;
  opts.diagnostics_path = dir / "diag.csv";
  std::filesystem::remove(*opts.diagnostics_path);
  std::vector<double> alpha;
  CHECK_THROWS_AS(op.rhs(phi, s, alpha, opts), NumericalFailure);
  CHECK(std::filesystem::exists(*opts.diagnostics_path));
  std::ifstream in(*opts.diagnostics_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "l1,l2,j1,j2,max_abs_flux,max_abs_gradient");
}

namespace
{
// Truncation errors ||L_h(phi) + H(grad phi)|| on sparse grids of levels
// N for H = (q1 + q2)^2 / 2, and the best approximation errors of H(grad phi)
// in the same spaces. The scheme is applied to phi itself: its traces are
// continuous, so both reconstructions equal the projected gradient.
struct Truncation
{
  std::vector<double> error, best;
};

Truncation truncation(int k, int M, std::vector<int> const &levels,
                      std::function<double(std::span<double const>)> const &d0,
                      std::function<double(std::span<double const>)> const &d1)
{
  auto const minus_h = [&](std::span<double const> x) {
    double const s = d0(x) + d1(x);
    return -0.5 * s * s;
  };
  Truncation t;
  for (int N : levels)
  {
    DiscretizationConfig cfg{2, k, M, N, alpert::Boundary::periodic, ""};
    LdgOperator op(cfg);
    auto const space = AdaptiveSpace::sparse_grid(2, N);
    auto const p0 = alpert::project_L2(d0, space, op.alpert());
    auto const p1 = alpert::project_L2(d1, space, op.alpert());
    Gradients g{HierCoeffField::stack({&p0, &p0, &p1, &p1})};
    std::vector<double> alpha;
    auto const r = op.rhs_from_gradients(g, half_square_of_sum(2, {2.0, 2.0}), alpha);
    t.error.push_back(bench::l2_error(r, op.alpert(), minus_h));
    auto const best = alpert::project_L2(minus_h, space, op.alpert());
    t.best.push_back(bench::l2_error(best, op.alpert(), minus_h));
  }
  return t;
}

double mean_order(std::vector<double> const &e, int span)
{
  return std::log2(e.front() / e.back()) / span;
}
} // namespace

TEST_CASE("truncation error decays on sparse grids")
{
  // phi = sin(2 pi x) / 2pi - cos(2 pi y) / 2pi.
  auto const d0 = [](std::span<double const> x) { return std::cos(two_pi * x[0]); };
  auto const d1 = [](std::span<double const> x) { return std::sin(two_pi * x[1]); };
  for (auto [k, M] : {std::pair{1, 2}, std::pair{2, 3}})
  {
    auto const t = truncation(k, M, {4, 5, 6}, d0, d1);
    double const order = mean_order(t.error, 2);
    MESSAGE("k " << k << " M " << M << " errors " << t.error[0] << " " << t.error[1] << " "
                 << t.error[2] << " order " << order);
    CHECK(order >= k + 0.5);
  }
}

TEST_CASE("truncation error of the Burgers data is near best approximation")
{
  // phi = -cos(2 pi (x + y)) / 2pi: H(grad phi) varies along the diagonal, so the
  // sparse-grid approximation error itself is pre-asymptotic at N <= 6.
  auto const d = [](std::span<double const> x) { return std::sin(two_pi * (x[0] + x[1])); };
  for (auto [k, M] : {std::pair{1, 2}, std::pair{2, 3}})
  {
    auto const low = truncation(k, M, {4, 5, 6}, d, d);
    for (std::size_t i = 0; i < low.error.size(); ++i)
    {
      CHECK(low.error[i] >= low.best[i] * (1.0 - 1e-9));
      CHECK(low.error[i] <= 1.15 * low.best[i]);
    }
    auto const high = truncation(k, M, {7, 8, 9}, d, d);
    double const order = mean_order(high.error, 2);
    MESSAGE("k " << k << " M " << M << " order N=7..9 " << order << ", N=4..6 "
                 << mean_order(low.error, 2));
    CHECK(order >= k + 0.5);
  }
}
