#include <benchmark/benchmark.h>

#include <random>

#include "iglab/capacity.hpp"
#include "iglab/classify.hpp"
#include "iglab/equilibrium.hpp"
#include "iglab/gallery.hpp"
#include "iglab/metric.hpp"

using namespace iglab;

namespace {

// Square grid with random weights, side n.
WeightedGraph grid(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  GraphBuilder b(n * n);
  for (Vertex x = 0; x < n * n; ++x) {
    b.set_measure(x, u(rng));
    if ((x + 1) % n != 0) b.add_edge(x, x + 1, u(rng));
    if (x + n < n * n) b.add_edge(x, x + n, u(rng));
  }
  return b.build();
}

void BM_Dijkstra(benchmark::State& state) {
  const WeightedGraph g = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const PathMetric m(sigma1(g));
    benchmark::DoNotOptimize(m.distances_from(0));
  }
  state.SetComplexityN(static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_Dijkstra)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_Equilibrium(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const WeightedGraph g = grid(n);
  const VertexSet u = VertexSet::range(0, static_cast<Vertex>(n));
  EquilibriumOptions opt;
  opt.solver = state.range(1) == 0 ? LinearSolver::SparseLDLT : LinearSolver::JacobiCG;
  for (auto _ : state) benchmark::DoNotOptimize(equilibrium(g, u, opt).capacity);
  state.SetLabel(state.range(1) == 0 ? "ldlt" : "cg");
}
BENCHMARK(BM_Equilibrium)->ArgsProduct({{16, 64, 128}, {0, 1}});

void BM_ChainTailCapacity(benchmark::State& state) {
  const GraphFamily f = make_family("ex5.1");
  const auto outer = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_tail_capacity(f, EndSelection::All, outer / 4, outer).capacity);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChainTailCapacity)->RangeMultiplier(8)->Range(1 << 10, 1 << 22)->Complexity();

void BM_LambdaSolve(benchmark::State& state) {
  const GraphFamily f = make_family("ex5.3a");
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_solve(f, 1.0, static_cast<std::size_t>(state.range(0))).residual);
  }
}
BENCHMARK(BM_LambdaSolve)->Arg(64)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
