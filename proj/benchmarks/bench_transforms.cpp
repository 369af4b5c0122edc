#include <benchmark/benchmark.h>

#include <cmath>

#include "sigmalab/grid.hpp"
#include "sigmalab/norms.hpp"

using namespace sigmalab;

namespace {

Field bench_field(const GridSpec& g) {
  return make_field(g, [](double x, double y, double z) {
    return std::exp(-(x * x + y * y + z * z));
  });
}

void BM_ForwardTransform1D(benchmark::State& state) {
  const GridSpec g = make_grid(1, static_cast<int>(state.range(0)), 400.0);
  const Field f = bench_field(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_spectral(f));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(g.total_points()));
}
BENCHMARK(BM_ForwardTransform1D)->Arg(256)->Arg(1024)->Arg(4096);

void BM_RoundTrip2D(benchmark::State& state) {
  const GridSpec g = make_grid(2, static_cast<int>(state.range(0)), 40.0);
  const Field f = bench_field(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_physical(to_spectral(f)));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(g.total_points()));
}
BENCHMARK(BM_RoundTrip2D)->Arg(64)->Arg(256);

void BM_SpectralNorm(benchmark::State& state) {
  const GridSpec g = make_grid(1, static_cast<int>(state.range(0)), 400.0);
  const SpectralField c = to_spectral(bench_field(g));
  for (auto _ : state) {
    benchmark::DoNotOptimize(l2_norm_from_spectrum(c));
  }
}
BENCHMARK(BM_SpectralNorm)->Arg(1024)->Arg(4096);

} // namespace

BENCHMARK_MAIN();
