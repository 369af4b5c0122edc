#include <benchmark/benchmark.h>

#include <cmath>

#include "sigmalab/grid.hpp"
#include "sigmalab/propagator.hpp"

using namespace sigmalab;

namespace {

void BM_MultiplierPair(benchmark::State& state) {
  double xi = 0.0;
  double acc = 0.0;
  for (auto _ : state) {
    xi = xi < 4.0 ? xi + 1e-3 : 0.0;
    const MultiplierPair m = multiplier_pair(xi, 1.25, 7.0);
    acc += m.m0 + m.m1;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_MultiplierPair);

void BM_PropagateLinear1D(benchmark::State& state) {
  const GridSpec g = make_grid(1, static_cast<int>(state.range(0)), 400.0);
  const Field u0 = make_field(
      g, [](double x, double, double) { return std::exp(-x * x); });
  const Field u1 = u0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_linear(u0, u1, 1.0, 10.0, 0, 0.0));
  }
}
BENCHMARK(BM_PropagateLinear1D)->Arg(1024)->Arg(4096);

void BM_ModeOdeOracle(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mode_ode_oracle(2.0, 1.5, {1.0, 0.2}, {0.3, -0.1}, 5.0,
                        static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_ModeOdeOracle)->Arg(1000)->Arg(10000);

} // namespace
