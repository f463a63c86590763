#include <benchmark/benchmark.h>

#include "sinekernel/determinants.hpp"
#include "sinekernel/nystrom.hpp"
#include "sinekernel/quadrature.hpp"
#include "sinekernel/resolvent.hpp"

using namespace sinekernel;

static void BM_GaussLegendreMapped(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_legendre(n, 0.0, 2.5));
}
BENCHMARK(BM_GaussLegendreMapped)->Arg(48)->Arg(100)->Arg(200);

static void BM_CompositeRule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(composite_gauss_legendre(0.0, 2.5, 0.25, 16));
}
BENCHMARK(BM_CompositeRule);

static void BM_LogDet(benchmark::State& state) {
  const double zeta = static_cast<double>(state.range(0)) / 2.0;
  for (auto _ : state) {
    const DiscretizedOperator op = discretize(KernelSpec::centered(), Interval{-zeta, zeta}, std::nullopt, 1.0);
    benchmark::DoNotOptimize(op.log_det());
  }
}
BENCHMARK(BM_LogDet)->Arg(1)->Arg(2)->Arg(5);

static void BM_ResolventSample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample(1.5));
}
BENCHMARK(BM_ResolventSample);

static void BM_SigmaSample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sigma_sample(1.5, 1.0));
}
BENCHMARK(BM_SigmaSample);

BENCHMARK_MAIN();
