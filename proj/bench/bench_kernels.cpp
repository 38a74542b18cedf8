#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "panelcp/double_cusum.hpp"
#include "panelcp/panel.hpp"
#include "panelcp/segmentation.hpp"
#include "panelcp/threshold.hpp"

namespace {

panelcp::Panel noise(std::size_t n, std::size_t T, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> rows(n, std::vector<double>(T));
  for (auto& r : rows) {
    for (auto& v : r) v = z(rng);
  }
  return panelcp::build_panel(rows);
}

template <auto Kernel>
void dc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto T = static_cast<std::size_t>(state.range(1));
  const auto panel = noise(n, T, 1);
  const std::vector<double> scales(n, 1.0);
  const panelcp::DcConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(panel, 1, static_cast<int>(T), scales, config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * T));
}

template <auto Kernel>
void calibrate(benchmark::State& state) {
  const auto panel = noise(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 2);
  const panelcp::SegmentationConfig config;
  panelcp::BootstrapOptions options;
  options.n_reps = 100;
  options.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(panel, config, options));
  }
}

}  // namespace

BENCHMARK(dc<panelcp::dc_statistic_serial>)->Name("dc_statistic/serial")->Args({16, 120})->Args({64, 512})->Args({200, 1000});
BENCHMARK(dc<panelcp::dc_statistic>)->Name("dc_statistic/openmp")->Args({16, 120})->Args({64, 512})->Args({200, 1000});
BENCHMARK(calibrate<panelcp::calibrate_threshold_serial>)
    ->Name("calibrate_threshold/serial")
    ->Args({16, 120})
    ->Args({30, 120})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(calibrate<panelcp::calibrate_threshold>)
    ->Name("calibrate_threshold/openmp")
    ->Args({16, 120})
    ->Args({30, 120})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
