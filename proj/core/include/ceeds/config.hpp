#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ceeds/control.hpp"
#include "ceeds/motif.hpp"
#include "ceeds/plant.hpp"

namespace ceeds::harness {

struct ExperimentConfig {
  std::string waveform = "0*60,50*20";
  double setpoint_rpm = 400.0;
  double kp = 0.05;
  double ki = 0.005;
  double kd = 0.0;
  std::optional<double> integral_limit;  // unset: duty_max * fitted slope
  double km = 1.0;
  std::size_t window_length = 35;
  std::size_t motif_count = 5;
  double radius_factor = 2.0;
  double min_amplitude = 0.0;
  std::size_t analysis_cutoff = 600;
  std::size_t hold_samples = 40;
  std::size_t cancellation_lead = 1;
  std::size_t total_samples = 1200;
  int loop_ms = 50;
  double duty_max = 500.0;
  std::size_t calibration_levels = 11;
  plant::PlantParams plant;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  double dt() const noexcept { return static_cast<double>(loop_ms) / 1000.0; }
  motif::AnalysisConfig analysis() const;

  // Throws kConfig on the first violated invariant.
  void validate() const;

  // Applies one key = value pair. Unknown keys and malformed values throw kConfig.
  void set(std::string_view key, std::string_view value);

  // Every field in a fixed order, values rendered so that set() reproduces them.
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
};

/// Flat "key = value" text; '#' starts a comment, blank lines are ignored.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

// Shortest text that parses back to the same double.
std::string format_real(double v);

}  // namespace ceeds::harness
