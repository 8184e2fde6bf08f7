#include <benchmark/benchmark.h>

#include "ghost/analysis.hpp"
#include "ghost/gaussian.hpp"
#include "ghost/grid.hpp"

namespace {

using namespace ghost;

void BM_CoincidenceScan(benchmark::State& st) {
  const ExperimentConfig cfg = reference_config();
  const TwoPhotonState s = detector_state(cfg);
  const auto zs = linspace(cfg.scan.z_min, cfg.scan.z_max, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(coincidence_profile(s, Detector::d2, 0.0, zs));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_CoincidenceScan)->Arg(2048)->Arg(16384);

void BM_MarginalScan(benchmark::State& st) {
  const ExperimentConfig cfg = reference_config();
  const TwoPhotonState s = detector_state(cfg);
  const auto zs = linspace(cfg.scan.z_min, cfg.scan.z_max, 2048);
  for (auto _ : st) benchmark::DoNotOptimize(marginal_profile(s, Detector::d1, zs));
}
BENCHMARK(BM_MarginalScan);

void BM_ExtractFringeWidth(benchmark::State& st) {
  const ExperimentConfig cfg = reference_config();
  Profile1D p;
  p.positions = linspace(cfg.scan.z_min, cfg.scan.z_max, 2048);
  p.values = coincidence_profile(detector_state(cfg), Detector::d2, 0.0, p.positions);
  for (auto _ : st) benchmark::DoNotOptimize(extract_fringe_width(p));
}
BENCHMARK(BM_ExtractFringeWidth);

void BM_GridPropagate(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const double half = 1.6e-3 * n / 256;  // fixed spacing keeps the kernel resolved
  const GridSpec spec = GridSpec::symmetric(half, n, half, n);
  const WavefunctionGrid g = grid_initial_state(2e4, 5e-4, spec);
  for (auto _ : st) benchmark::DoNotOptimize(grid_propagate(g, Detector::d1, 780e-9, 0.05));
}
BENCHMARK(BM_GridPropagate)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
