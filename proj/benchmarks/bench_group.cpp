#include <benchmark/benchmark.h>

#include "latstab/haar_weyl.hpp"
#include "latstab/rng.hpp"
#include "latstab/su2.hpp"

using namespace latstab;

static void BM_HaarSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    SampleStream rng(1, i++);
    benchmark::DoNotOptimize(haar_sample(GroupKind::U, n, rng));
  }
}
BENCHMARK(BM_HaarSample)->Arg(1)->Arg(2)->Arg(3)->Arg(8);

static void BM_Su2ExpLog(benchmark::State& state) {
  su2::Vec3 a{0.3, -1.1, 0.7};
  for (auto _ : state) {
    const auto p = su2::su2_exp(a);
    a = su2::su2_log(p);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_Su2ExpLog);

static void BM_WeylIntegrate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClassFunction f = [](std::span<const double> l) {
    double s = 0.0;
    for (double v : l) s += 1.0 - std::cos(v);
    return std::exp(-s);
  };
  for (auto _ : state) benchmark::DoNotOptimize(weyl_integrate(f, n, GroupKind::U));
}
BENCHMARK(BM_WeylIntegrate)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
