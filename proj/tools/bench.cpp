#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "riceband/kac_rice.hpp"
#include "riceband/monte_carlo.hpp"
#include "riceband/zero_set.hpp"

using namespace riceband;

namespace {

const ScalarField kQuadric = [](std::span<const double> x, std::span<double> grad) {
  if (!grad.empty()) {
    grad[0] = 2.0 * x[0];
    grad[1] = 2.0 * x[1];
  }
  return x[0] * x[0] + x[1] * x[1] - 0.25;
};

void bm_oscillatory(benchmark::State& state, Exec exec) {
  const DomainBox box({-1.0, -1.0}, {1.0, 1.0});
  QuadSizes quad;
  quad.nodes_per_axis = 256;
  for (auto _ : state) {
    benchmark::DoNotOptimize(area_deterministic(kQuadric, box, 50.0, quad, exec));
  }
}

void bm_favard(benchmark::State& state, Exec exec) {
  const DomainBox box({-2.0, -2.0}, {2.0, 2.0});
  const SphereRule rule = build_sphere_rule(2, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(favard_area(kQuadric, box, rule, 128, 256, exec));
  }
}

void bm_mc_replicates(benchmark::State& state, Exec exec) {
  const Ensemble e = make_ensemble(EnsembleKind::Kostlan, 2, 2);
  const DomainBox box({-1.0, -1.0}, {1.0, 1.0});
  McConfig cfg;
  cfg.replicates = 50;
  cfg.grid = GridSpec(2, 101);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_expected_area(e, box, cfg, exec).value);
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_oscillatory, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_oscillatory, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_favard, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_favard, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_mc_replicates, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_mc_replicates, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
