#include <memory>

#include <benchmark/benchmark.h>

#include "latstab/actions.hpp"
#include "latstab/lattice.hpp"
#include "latstab/partition.hpp"
#include "latstab/rng.hpp"

using namespace latstab;

static void BM_GaugeFixing(benchmark::State& state) {
  const Lattice lattice(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(enhanced_temporal_gauge(lattice));
}
BENCHMARK(BM_GaugeFixing)->Args({2, 8})->Args({3, 4})->Args({4, 3});

static void BM_BoseExact(benchmark::State& state) {
  ModelParams p;
  p.d = static_cast<int>(state.range(0));
  p.L = static_cast<int>(state.range(1));
  p.N = 2;
  p.a = 0.1;
  p.m_u = 0.5;
  auto lattice = std::make_shared<const Lattice>(p.d, p.L, p.a);
  SampleStream rng(3, 0);
  const auto cfg = GaugeConfig::random(lattice, GroupKind::U, p.N, rng);
  for (auto _ : state) benchmark::DoNotOptimize(z_bose_exact(cfg, p, true));
}
BENCHMARK(BM_BoseExact)->Args({2, 4})->Args({3, 3})->Args({4, 3})->Unit(benchmark::kMillisecond);

static void BM_WilsonMc(benchmark::State& state) {
  ModelParams p;
  p.d = 3;
  p.L = 2;
  p.N = 2;
  p.group = GroupKind::SU;
  const Lattice lattice(p.d, p.L, p.a);
  McOptions opts;
  opts.n_samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(z_wilson_mc(lattice, p, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WilsonMc)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
