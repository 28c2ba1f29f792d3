#include <benchmark/benchmark.h>

#include "gsq/math_util.hpp"
#include "gsq/queue.hpp"

using namespace gsq;

static void BM_Lindley(benchmark::State& state) {
  VarianceModel m = VarianceModel::fbm(0.5);
  GridSpec grid(0.01, std::size_t(state.range(0)));
  IncrementSampler s(m, grid);
  SampledPath p = assemble_path(s.sample(7), grid);
  for (auto _ : state) {
    QueuePath q = reflect_lindley(p, 1.0, 0.0);
    benchmark::DoNotOptimize(q.q.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Lindley)->Arg(1 << 12)->Arg(1 << 18);

static void BM_StationaryQueue(benchmark::State& state) {
  VarianceModel m = VarianceModel::fbm(0.5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    QueuePath q = stationary_queue(m, 1.0, 10.0, 1.0 / 64, seed++);
    benchmark::DoNotOptimize(q.q.data());
  }
}
BENCHMARK(BM_StationaryQueue);
