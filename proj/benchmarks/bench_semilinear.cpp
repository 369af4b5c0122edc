#include <benchmark/benchmark.h>

#include <cmath>

#include "sigmalab/grid.hpp"
#include "sigmalab/semilinear.hpp"

using namespace sigmalab;

namespace {

void BM_DuhamelStep(benchmark::State& state) {
  SemilinearConfig cfg;
  cfg.grid = make_grid(1, static_cast<int>(state.range(0)), 400.0);
  cfg.sigma = 1.0;
  cfg.p = 2.0;
  cfg.dt = 0.05;
  const Field u0 = make_field(
      cfg.grid, [](double x, double, double) { return 0.1 * std::exp(-x * x); });
  const Field u1 = zero_field(cfg.grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(duhamel_step(u0, u1, cfg));
  }
}
BENCHMARK(BM_DuhamelStep)->Arg(512)->Arg(1024)->Arg(4096);

void BM_ShortRun(benchmark::State& state) {
  SemilinearConfig cfg;
  cfg.grid = make_grid(1, 1024, 400.0);
  cfg.sigma = 1.0;
  cfg.p = 4.0;
  cfg.dt = 0.05;
  cfg.t_end = 5.0;
  const Field u0 = make_field(
      cfg.grid, [](double x, double, double) { return 0.01 * std::exp(-x * x); });
  const Field u1 = u0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_semilinear(u0, u1, cfg));
  }
}
BENCHMARK(BM_ShortRun);

} // namespace
