#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceeds/cancellation.hpp"
#include "ceeds/config.hpp"
#include "ceeds/control.hpp"

namespace ceeds::harness {

struct SampleRecord {
  std::size_t sample_index = 0;
  long long time_ms = 0;
  control::Phase phase = control::Phase::kCollect;
  double setpoint_rpm = 0.0;
  double measured_rpm = 0.0;
  double error = 0.0;
  double duty = 0.0;
  double interference_rpm = 0.0;
  double cancellation_rpm = 0.0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct ExperimentLog {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<SampleRecord> records;
  std::optional<cancel::CancellationCycle> chosen;

  std::vector<double> errors() const;
};

struct ExperimentResult {
  ExperimentLog baseline;  // km = 0
  ExperimentLog ceeds;
  control::TransferFunction transfer;
};

/// Open-loop duty ladder on a noisy plant; one averaged steady-state point
/// per level.
std::vector<control::CalibrationPoint> calibrate(const ExperimentConfig& config);

struct RunOptions {
  bool realtime = false;  // sleep loop_ms between samples
};

/// Paired baseline/CEEDS runs over identical interference and noise streams.
ExperimentResult run_experiment(const ExperimentConfig& config, RunOptions options = {});

/// 100 * (1 - sum|e_ceeds| / sum|e_base|) over samples >= from_sample.
double error_reduction(std::span<const double> baseline, std::span<const double> ceeds,
                       std::size_t from_sample);
double error_reduction(const ExperimentLog& baseline, const ExperimentLog& ceeds,
                       std::size_t from_sample);

/// Fixed reference point for the early-window metric, past motor start-up.
inline constexpr std::size_t kStartupSettledSample = 55;

/// Human-readable run summary; deterministic for a given result.
std::string summarize(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace ceeds::harness
