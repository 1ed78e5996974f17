#include <benchmark/benchmark.h>

#include "ceeds/cancellation.hpp"
#include "ceeds/config.hpp"
#include "ceeds/experiment.hpp"

namespace {

// Analysis window at the default cutoff: what the controller computes while
// the PID is held.
void BM_AnalyzeErrorLog(benchmark::State& state) {
  ceeds::harness::ExperimentConfig cfg;
  cfg.km = 0.0;
  const auto result = ceeds::harness::run_experiment(cfg);
  const auto errors = result.baseline.errors();
  const std::span<const double> window(errors.data(), cfg.analysis_cutoff);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ceeds::cancel::analyze_error_log(window, cfg.analysis()));
  }
}
BENCHMARK(BM_AnalyzeErrorLog)->Unit(benchmark::kMillisecond);

void BM_PairedExperiment(benchmark::State& state) {
  ceeds::harness::ExperimentConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ceeds::harness::run_experiment(cfg));
}
BENCHMARK(BM_PairedExperiment)->Unit(benchmark::kMillisecond);

}  // namespace
