#include <benchmark/benchmark.h>

#include "latstab/rmt.hpp"
#include "latstab/su2.hpp"

using namespace latstab;

static void BM_WOfBeta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(log_w_of_beta(1e-3, n, ActionChoice::Wilson));
}
BENCHMARK(BM_WOfBeta)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_D2FreeEnergy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(d2_free_energy(2, {1e-1, 1e-2, 1e-3}));
}
BENCHMARK(BM_D2FreeEnergy)->Unit(benchmark::kMillisecond);

static void BM_Su2SingleBond(benchmark::State& state) {
  const double g2 = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(su2::su2_z_gluon(1e-3, g2, 4));
}
BENCHMARK(BM_Su2SingleBond)->Arg(1)->Arg(4);
