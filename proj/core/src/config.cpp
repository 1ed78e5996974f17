#include "ceeds/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ceeds/error.hpp"

namespace ceeds::harness {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kConfig,
              "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double to_real(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() ||
      !std::isfinite(v)) {
    bad_value(key, value);
  }
  return v;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value);
  }
  return v;
}

}  // namespace

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

motif::AnalysisConfig ExperimentConfig::analysis() const {
  motif::AnalysisConfig a;
  a.window_length = window_length;
  a.motif_count = motif_count;
  a.radius_factor = radius_factor;
  a.min_amplitude = min_amplitude;
  a.analysis_cutoff = analysis_cutoff;
  return a;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kConfig, what);
  };
  analysis().validate();
  require(loop_ms > 0, "loop_ms must be positive");
  require(total_samples > analysis_cutoff + hold_samples,
          "total_samples must exceed analysis_cutoff + hold_samples");
  require(setpoint_rpm > 0.0, "setpoint_rpm must be positive");
  require(duty_max > 0.0, "duty_max must be positive");
  require(calibration_levels >= 2, "calibration_levels must be >= 2");
  require(!integral_limit || *integral_limit >= 0.0, "integral_limit must be non-negative");
  require(plant.ku > 0.0, "ku must be positive");
  require(plant.tau > 0.0, "tau must be positive");
  require(plant.noise_sigma >= 0.0, "noise_sigma must be non-negative");
  require(dt() <= plant.tau * 2.0, "loop period too long for a stable Euler plant step");
  try {
    plant::parse_waveform(waveform);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "waveform") waveform = std::string(value);
  else if (key == "setpoint_rpm") setpoint_rpm = to_real(key, value);
  else if (key == "kp") kp = to_real(key, value);
  else if (key == "ki") ki = to_real(key, value);
  else if (key == "kd") kd = to_real(key, value);
  else if (key == "integral_limit") {
    if (value == "auto") integral_limit.reset();
    else integral_limit = to_real(key, value);
  }
  else if (key == "km") km = to_real(key, value);
  else if (key == "window_length") window_length = to_int<std::size_t>(key, value);
  else if (key == "motif_count") motif_count = to_int<std::size_t>(key, value);
  else if (key == "radius_factor") radius_factor = to_real(key, value);
  else if (key == "min_amplitude") min_amplitude = to_real(key, value);
  else if (key == "analysis_cutoff") analysis_cutoff = to_int<std::size_t>(key, value);
  else if (key == "hold_samples") hold_samples = to_int<std::size_t>(key, value);
  else if (key == "cancellation_lead") cancellation_lead = to_int<std::size_t>(key, value);
  else if (key == "total_samples") total_samples = to_int<std::size_t>(key, value);
  else if (key == "loop_ms") loop_ms = to_int<int>(key, value);
  else if (key == "duty_max") duty_max = to_real(key, value);
  else if (key == "calibration_levels") calibration_levels = to_int<std::size_t>(key, value);
  else if (key == "ku") plant.ku = to_real(key, value);
  else if (key == "tau") plant.tau = to_real(key, value);
  else if (key == "noise_sigma") plant.noise_sigma = to_real(key, value);
  else if (key == "seed") seed = to_int<std::uint64_t>(key, value);
  else if (key == "output_dir") output_dir = std::string(value);
  else throw Error(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_key_values() const {
  return {
      {"waveform", waveform},
      {"setpoint_rpm", format_real(setpoint_rpm)},
      {"kp", format_real(kp)},
      {"ki", format_real(ki)},
      {"kd", format_real(kd)},
      {"integral_limit", integral_limit ? format_real(*integral_limit) : "auto"},
      {"km", format_real(km)},
      {"window_length", std::to_string(window_length)},
      {"motif_count", std::to_string(motif_count)},
      {"radius_factor", format_real(radius_factor)},
      {"min_amplitude", format_real(min_amplitude)},
      {"analysis_cutoff", std::to_string(analysis_cutoff)},
      {"hold_samples", std::to_string(hold_samples)},
      {"cancellation_lead", std::to_string(cancellation_lead)},
      {"total_samples", std::to_string(total_samples)},
      {"loop_ms", std::to_string(loop_ms)},
      {"duty_max", format_real(duty_max)},
      {"calibration_levels", std::to_string(calibration_levels)},
      {"ku", format_real(plant.ku)},
      {"tau", format_real(plant.tau)},
      {"noise_sigma", format_real(plant.noise_sigma)},
      {"seed", std::to_string(seed)},
      {"output_dir", output_dir},
  };
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace ceeds::harness
