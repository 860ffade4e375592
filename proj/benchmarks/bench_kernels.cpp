// Parallel kernels against their serial references on sparse grids.

#include "hjsg/alpert/projection.hpp"
#include "hjsg/ldg/hamiltonian.hpp"
#include "hjsg/ldg/operator.hpp"
#include "hjsg/mra/unidirectional.hpp"

#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace hjsg;

namespace
{
struct Setup
{
  std::shared_ptr<ldg::LdgOperator const> op;
  mra::HierCoeffField phi;
};

Setup make_setup(int dim, int N, int k)
{
  auto op = std::make_shared<ldg::LdgOperator const>(
      ldg::DiscretizationConfig{dim, k, k + 1, N, alpert::Boundary::periodic, ""});
  auto const space = mra::AdaptiveSpace::sparse_grid(dim, N);
  mra::HierCoeffField phi(space, mra::BasisFamily::alpert, mra::BlockShape::uniform(dim, k + 1));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double &v : phi.data())
    v = dist(rng);
  return {op, std::move(phi)};
}

ldg::HamiltonianSpec burgers(int dim)
{
  ldg::HamiltonianSpec s;
  s.dim = dim;
  s.H = [](std::span<double const>, std::span<double const> q, double) {
    double t = 0.0;
    for (double v : q)
      t += v;
    return 0.5 * t * t;
  };
  s.alpha_bound.assign(dim, static_cast<double>(dim));
  return s;
}

void set_counters(benchmark::State &state, Setup const &s)
{
  state.counters["elements"] = static_cast<double>(s.phi.space()->size());
  state.counters["dof"] = static_cast<double>(s.phi.data().size());
}

void BM_apply_dim(benchmark::State &state)
{
  auto const s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(mra::apply_dim(s.op->flux_table(1), 0, mra::CouplingPart::full, s.phi,
                                            mra::BasisFamily::alpert));
  set_counters(state, s);
}

void BM_apply_dim_serial(benchmark::State &state)
{
  auto const s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(mra::apply_dim_serial(s.op->flux_table(1), 0, mra::CouplingPart::full,
                                                   s.phi, mra::BasisFamily::alpert));
  set_counters(state, s);
}

void tensor(benchmark::State &state, bool serial)
{
  int const dim = static_cast<int>(state.range(0));
  auto const s = make_setup(dim, static_cast<int>(state.range(1)), 2);
  std::vector<mra::Operator1D const *> ops(dim, &s.op->flux_table(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(mra::apply_tensor(ops, s.phi, mra::BasisFamily::alpert, serial));
  set_counters(state, s);
}

void BM_apply_tensor(benchmark::State &state) { tensor(state, false); }
void BM_apply_tensor_serial(benchmark::State &state) { tensor(state, true); }

void rhs(benchmark::State &state, bool serial)
{
  int const dim = static_cast<int>(state.range(0));
  auto const s = make_setup(dim, static_cast<int>(state.range(1)), 2);
  auto const spec = burgers(dim);
  ldg::RhsOptions opts;
  opts.serial = serial;
  std::vector<double> alpha;
  for (auto _ : state)
    benchmark::DoNotOptimize(s.op->rhs(s.phi, spec, alpha, opts));
  set_counters(state, s);
}

void BM_rhs(benchmark::State &state) { rhs(state, false); }
void BM_rhs_serial(benchmark::State &state) { rhs(state, true); }
} // namespace

BENCHMARK(BM_apply_dim)->Args({2, 6})->Args({3, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_dim_serial)->Args({2, 6})->Args({3, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_tensor)->Args({2, 6})->Args({3, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_tensor_serial)->Args({2, 6})->Args({3, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rhs)->Args({2, 6})->Args({3, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rhs_serial)->Args({2, 6})->Args({3, 5})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
