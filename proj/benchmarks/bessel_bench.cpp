#include <benchmark/benchmark.h>

#include "mppc/bessel.hpp"

namespace {

void BM_BesselSeries(benchmark::State& state) {
  double t = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mppc::bessel_j(2.5, t));
    t = t < 11.0 ? t + 0.37 : 0.5;
  }
}
BENCHMARK(BM_BesselSeries);

void BM_BesselQuadrature(benchmark::State& state) {
  const auto t = static_cast<double>(state.range(0));
  const double nu = state.range(1) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(mppc::bessel_j(nu, t));
}
BENCHMARK(BM_BesselQuadrature)->ArgsProduct({{30, 1000, 10000}, {2, 5}});

}  // namespace
