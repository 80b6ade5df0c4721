// Microbenchmarks for the hot kernels: sparse products, Arnoldi steps,
// decomposition and the hybrid solver.

#include <benchmark/benchmark.h>

#include "grank/decomposition.hpp"
#include "grank/pagerank.hpp"
#include "grank/spectral.hpp"
#include "grank/stochastic.hpp"
#include "grank/synth.hpp"

using namespace grank;

namespace {

DirectedGraph web_like(std::size_t n) {
  return generate_synthetic(PreferentialAttachmentParams{n, 8}, 42);
}

void bm_apply_s(benchmark::State& state) {
  auto g = web_like(static_cast<std::size_t>(state.range(0)));
  StochasticOperator op(g);
  auto v = uniform_vector(g.node_count());
  for (auto _ : state) {
    auto y = op.apply_s(v);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(g.link_count()));
}
BENCHMARK(bm_apply_s)->Arg(10000)->Arg(100000);

void bm_apply_g(benchmark::State& state) {
  auto g = web_like(static_cast<std::size_t>(state.range(0)));
  StochasticOperator op(g);
  auto v = uniform_vector(g.node_count());
  for (auto _ : state) {
    auto y = op.apply_g(1.0 - 1e-8, v);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(g.link_count()));
}
BENCHMARK(bm_apply_g)->Arg(10000)->Arg(100000);

void bm_decompose(benchmark::State& state) {
  std::vector<std::size_t> cycles;
  for (int k = 0; k < 200; ++k) cycles.push_back(2 + k % 17);
  auto g = generate_synthetic(
      PlantedSubspaceParams{cycles, static_cast<std::size_t>(state.range(0)), 5}, 7);
  for (auto _ : state) {
    auto d = decompose(g);
    benchmark::DoNotOptimize(d.core.data());
  }
}
BENCHMARK(bm_decompose)->Arg(2000)->Arg(20000);

void bm_arnoldi_step(benchmark::State& state) {
  auto g = web_like(20000);
  StochasticOperator op(g);
  FunctionMap map(g.node_count(), [&](std::span<const double> v) { return op.apply_s(v); });
  auto start = uniform_vector(g.node_count());
  const auto dim = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto f = arnoldi(map, start, dim);
    benchmark::DoNotOptimize(f.hessenberg.data());
  }
}
BENCHMARK(bm_arnoldi_step)->Arg(20)->Arg(100);

void bm_hybrid_solver(benchmark::State& state) {
  auto g = web_like(static_cast<std::size_t>(state.range(0)));
  StochasticOperator op(g);
  SolverConfig cfg;
  cfg.power_steps_per_cycle = 200;
  cfg.arnoldi_dim = 30;
  for (auto _ : state) {
    auto result = solve_pagerank_hybrid(op, 0.85, cfg);
    benchmark::DoNotOptimize(result.vector.data());
  }
}
BENCHMARK(bm_hybrid_solver)->Arg(10000)->Arg(50000);

}  // namespace
