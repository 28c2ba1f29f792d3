#include <benchmark/benchmark.h>

#include "gsq/math_util.hpp"
#include "gsq/sampling.hpp"

using namespace gsq;

static void BM_SpectralSample(benchmark::State& state) {
  VarianceModel m = VarianceModel::fbm(0.75);
  GridSpec grid(0.001, std::size_t(state.range(0)));
  IncrementSampler s(m, grid);
  auto ws = s.make_workspace();
  std::vector<double> inc;
  std::uint64_t r = 0;
  for (auto _ : state) {
    s.sample_into(replica_seed(1, 2, r++), ws, inc);
    benchmark::DoNotOptimize(inc.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpectralSample)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

static void BM_EmbeddingSetup(benchmark::State& state) {
  VarianceModel m = VarianceModel::fbm(0.75);
  GridSpec grid(0.001, std::size_t(state.range(0)));
  for (auto _ : state) {
    IncrementSampler s(m, grid);
    benchmark::DoNotOptimize(s.embedding_size());
  }
}
BENCHMARK(BM_EmbeddingSetup)->Arg(1 << 12)->Arg(1 << 16);

static void BM_AssemblePath(benchmark::State& state) {
  GridSpec grid(0.001, std::size_t(state.range(0)));
  std::vector<double> inc(grid.count - 1, 0.25);
  for (auto _ : state) {
    SampledPath p = assemble_path(inc, grid);
    benchmark::DoNotOptimize(p.x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AssemblePath)->Arg(1 << 14)->Arg(1 << 20);

BENCHMARK_MAIN();
