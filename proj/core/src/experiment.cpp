#include "ceeds/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "ceeds/error.hpp"
#include "ceeds/plant.hpp"

namespace ceeds::harness {
namespace {

// Calibration noise comes from its own stream so both controller runs see
// the same plant noise regardless of how calibration is configured.
constexpr std::uint64_t kCalibrationStream = 0x9e3779b97f4a7c15ULL;

ExperimentLog simulate(const ExperimentConfig& config, const control::TransferFunction& transfer,
                       double km, const plant::Waveform& waveform, RunOptions options) {
  control::ControllerConfig cc;
  cc.gains = {config.kp, config.ki, config.kd,
              config.integral_limit.value_or(config.duty_max * transfer.slope())};
  cc.km = km;
  cc.setpoint_rpm = config.setpoint_rpm;
  cc.analysis = config.analysis();
  cc.hold_samples = config.hold_samples;
  cc.cancellation_lead = config.cancellation_lead;
  cc.sample_period_ms = config.loop_ms;
  control::CeedsController controller(cc, transfer);

  plant::PlantState plant{0.0, config.plant, plant::NoiseSource(config.seed)};
  const double dt = config.dt();

  ExperimentLog log;
  for (auto& kv : config.to_key_values()) log.header.push_back(std::move(kv));
  log.header.emplace_back("run_km", format_real(km));
  log.header.emplace_back("rng", std::string(plant::NoiseSource::kAlgorithm));
  log.header.emplace_back("transfer_slope", format_real(transfer.slope()));
  log.header.emplace_back("transfer_intercept", format_real(transfer.intercept()));
  log.records.reserve(config.total_samples);

  // Reading taken before the first command, with the motor at rest.
  double measured = plant::plant_step(plant, 0.0, plant::waveform_sample(waveform, 0), dt);
  auto next_tick = std::chrono::steady_clock::now();
  for (std::size_t t = 0; t < config.total_samples; ++t) {
    const double duty = controller.step(measured, t, dt);
    SampleRecord r;
    r.sample_index = t;
    r.time_ms = static_cast<long long>(t) * config.loop_ms;
    r.phase = controller.last_phase();
    r.setpoint_rpm = config.setpoint_rpm;
    r.measured_rpm = measured;
    r.error = measured - config.setpoint_rpm;
    r.duty = duty;
    r.interference_rpm = plant::waveform_sample(waveform, t);
    r.cancellation_rpm = controller.last_cancellation_rpm();
    log.records.push_back(r);

    measured = plant::plant_step(plant, duty, plant::waveform_sample(waveform, t + 1), dt);
    if (options.realtime) {
      next_tick += std::chrono::milliseconds(config.loop_ms);
      std::this_thread::sleep_until(next_tick);
    }
  }
  if (controller.analysis()) log.chosen = controller.analysis()->chosen;
  if (controller.phase() != control::Phase::kApply) log.chosen.reset();
  return log;
}

double abs_sum_from(std::span<const double> e, std::size_t from) {
  double s = 0.0;
  for (std::size_t t = from; t < e.size(); ++t) s += std::abs(e[t]);
  return s;
}

}  // namespace

std::vector<double> ExperimentLog::errors() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.error);
  return out;
}

std::vector<control::CalibrationPoint> calibrate(const ExperimentConfig& config) {
  const double dt = config.dt();
  plant::PlantState plant{0.0, config.plant,
                          plant::NoiseSource(config.seed ^ kCalibrationStream)};
  const auto settle = static_cast<std::size_t>(std::ceil(10.0 * config.plant.tau / dt));
  constexpr std::size_t kAveraged = 20;

  std::vector<control::CalibrationPoint> points;
  for (std::size_t level = 0; level < config.calibration_levels; ++level) {
    const double duty = config.duty_max * static_cast<double>(level) /
                        static_cast<double>(config.calibration_levels - 1);
    for (std::size_t k = 0; k < settle; ++k) plant::plant_step(plant, duty, 0.0, dt);
    double sum = 0.0;
    for (std::size_t k = 0; k < kAveraged; ++k) sum += plant::plant_step(plant, duty, 0.0, dt);
    points.push_back({duty, sum / static_cast<double>(kAveraged)});
  }
  return points;
}

ExperimentResult run_experiment(const ExperimentConfig& config, RunOptions options) {
  config.validate();
  const plant::Waveform waveform = plant::parse_waveform(config.waveform);
  const auto points = calibrate(config);
  const control::TransferFunction transfer = control::fit_transfer(points);
  ExperimentResult result{simulate(config, transfer, 0.0, waveform, options),
                          simulate(config, transfer, config.km, waveform, options), transfer};
  return result;
}

double error_reduction(std::span<const double> baseline, std::span<const double> ceeds,
                       std::size_t from_sample) {
  if (baseline.size() != ceeds.size()) {
    throw Error(ErrorCode::kInvalidInput, "logs differ in length");
  }
  if (from_sample >= baseline.size()) {
    throw Error(ErrorCode::kInvalidInput, "from_sample beyond end of log");
  }
  const double base = abs_sum_from(baseline, from_sample);
  if (base == 0.0) throw Error(ErrorCode::kUndefinedMetric, "baseline error sum is zero");
  return 100.0 * (1.0 - abs_sum_from(ceeds, from_sample) / base);
}

double error_reduction(const ExperimentLog& baseline, const ExperimentLog& ceeds,
                       std::size_t from_sample) {
  return error_reduction(baseline.errors(), ceeds.errors(), from_sample);
}

std::string summarize(const ExperimentConfig& config, const ExperimentResult& result) {
  std::ostringstream out;
  char buf[160];
  out << "waveform: " << config.waveform << "\n";
  out << "seed: " << config.seed << "\n";
  std::snprintf(buf, sizeof buf, "transfer: rpm = %.6g * duty + %.6g\n",
                result.transfer.slope(), result.transfer.intercept());
  out << buf;
  if (const auto& c = result.ceeds.chosen) {
    std::snprintf(buf, sizeof buf, "chosen: rank %d, offset %zu, modal_period %zu\n",
                  c->source_rank, c->offset, c->modal_period());
    out << buf;
  } else {
    out << "chosen: none (PIDF fallback)\n";
  }
  for (std::size_t from : {kStartupSettledSample, config.analysis_cutoff}) {
    try {
      std::snprintf(buf, sizeof buf, "reduction_from_%zu: %.2f%%\n", from,
                    error_reduction(result.baseline, result.ceeds, from));
    } catch (const Error& e) {
      std::snprintf(buf, sizeof buf, "reduction_from_%zu: undefined (%s)\n", from, e.what());
    }
    out << buf;
  }
  return out.str();
}

}  // namespace ceeds::harness
