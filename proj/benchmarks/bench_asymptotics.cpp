#include <benchmark/benchmark.h>

#include "gsq/asymptotics.hpp"

using namespace gsq;

static void BM_LevelFunction(benchmark::State& state) {
  VarianceModel m = VarianceModel::fbm(0.75);
  double u = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_of_u(m, 1.0, u));
    u = u < 1e6 ? u * 1.5 : 1.0;
  }
}
BENCHMARK(BM_LevelFunction);

static void BM_LevelFunctionSrd(benchmark::State& state) {
  VarianceModel m = VarianceModel::srd_integrated(SrdCorrelation::exp_power(1.0));
  double u = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_of_u(m, 1.0, u));
    u = u < 1e6 ? u * 1.5 : 1.0;
  }
}
BENCHMARK(BM_LevelFunctionSrd);

static void BM_GeneralizedInverse(benchmark::State& state) {
  VarianceModel m = VarianceModel::fbm(0.75);
  double v = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_inverse(m, 1.0, v));
    v = v < 1e3 ? v * 1.3 : 2.0;
  }
}
BENCHMARK(BM_GeneralizedInverse);

static void BM_BoundaryEvaluator(benchmark::State& state) {
  VarianceModel m = VarianceModel::fbm(0.75);
  FpEvaluator f(m, 1.0, 2.0, 10.0, 1e6);
  double t = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(t));
    t = t < 9e5 ? t * 1.001 : 10.0;
  }
}
BENCHMARK(BM_BoundaryEvaluator);
