#include <benchmark/benchmark.h>

#include <random>

#include "qvi/obstacle_maps.hpp"

using namespace qvi;

namespace {

GridFunction profile(int n) {
  Domain1D d(n, 1.0);
  GridFunction y = GridFunction::constant(d, 0.0);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.0, 4.0);
  for (double& v : y.values) v = dist(rng);
  return y;
}

void bench_serial(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto y = profile(n);
  auto cfg = ImpulseConfig::zero_cost(1.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(theta_impulse_serial(y, cfg));
}

void bench_parallel(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto y = profile(n);
  auto cfg = ImpulseConfig::zero_cost(1.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(theta_impulse(y, cfg));
}

void bench_suffix(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto y = profile(n);
  auto cfg = ImpulseConfig::zero_cost(1.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(theta_impulse_suffix(y, cfg));
}

}  // namespace

BENCHMARK(bench_serial)->Range(64, 1 << 14);
BENCHMARK(bench_parallel)->Range(64, 1 << 14);
BENCHMARK(bench_suffix)->Range(64, 1 << 14);

BENCHMARK_MAIN();
