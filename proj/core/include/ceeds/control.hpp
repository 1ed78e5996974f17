#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "ceeds/cancellation.hpp"
#include "ceeds/motif.hpp"
#include "ceeds/time_series.hpp"

namespace ceeds::control {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_limit = 0.0;  // clamp on |integral|, units of RPM * s
};

struct PidState {
  double integral = 0.0;
  double previous_error = 0.0;
  bool initialized = false;
};

struct PidOutput {
  double contribution = 0.0;
  PidState state;
};

/// kp*e + ki*clamp(I + e*dt) + kd*(e - e_prev)/dt. The derivative term is
/// suppressed on the first step after construction.
PidOutput pid_step(const PidState& state, const PidGains& gains, double error, double dt);

struct CalibrationPoint {
  double duty = 0.0;
  double rpm = 0.0;
};

/// Affine map from duty cycle to steady-state RPM on [0, duty_max].
class TransferFunction {
 public:
  TransferFunction(double slope, double intercept, double duty_max);

  double slope() const noexcept { return slope_; }
  double intercept() const noexcept { return intercept_; }
  double duty_max() const noexcept { return duty_max_; }

  double forward(double duty) const noexcept { return slope_ * duty + intercept_; }
  double inverse(double rpm) const noexcept { return (rpm - intercept_) / slope_; }
  // Duty change that moves steady-state speed by `rpm`.
  double rpm_to_duty_delta(double rpm) const noexcept { return rpm / slope_; }
  double clamp_duty(double duty) const noexcept;

 private:
  double slope_;
  double intercept_;
  double duty_max_;
};

/// Least-squares line through the calibration points. The domain runs from
/// zero to the largest calibrated duty.
TransferFunction fit_transfer(std::span<const CalibrationPoint> calibration);

enum class Phase { kCollect, kHold, kApply, kFallbackPidf };

std::string_view to_string(Phase phase) noexcept;

struct ControllerConfig {
  PidGains gains;
  double km = 1.0;
  double setpoint_rpm = 400.0;
  motif::AnalysisConfig analysis;
  std::size_t hold_samples = 40;
  // Samples by which the cancellation cycle is read ahead of the current
  // index. A duty command issued at sample t first shows up in the
  // measurement at t + 1.
  std::size_t cancellation_lead = 1;
  int sample_period_ms = 50;
};

/// PIDF controller with the matrix-profile cancellation term. Runs
/// Collect -> Hold -> (Apply | FallbackPidf); the analysis pipeline executes
/// synchronously inside the step that fills the error log.
class CeedsController {
 public:
  CeedsController(ControllerConfig config, TransferFunction transfer);

  /// Duty command for this sample. `sample_index` must advance by one per call.
  double step(double measured_rpm, std::size_t sample_index, double dt);

  Phase phase() const noexcept { return phase_; }
  // Phase the most recent step() ran in.
  Phase last_phase() const noexcept { return last_phase_; }
  // km * M(.) contribution of the most recent step, in RPM.
  double last_cancellation_rpm() const noexcept { return last_cancellation_rpm_; }

  const PidState& pid_state() const noexcept { return pid_state_; }
  const TimeSeries& error_log() const noexcept { return error_log_; }
  const ControllerConfig& config() const noexcept { return config_; }
  const TransferFunction& transfer() const noexcept { return transfer_; }
  // Present only in the Apply phase.
  const std::optional<cancel::CancellationCycle>& chosen() const noexcept { return chosen_; }
  // Result of the analysis pipeline once it has run.
  const std::optional<cancel::Analysis>& analysis() const noexcept { return analysis_; }

 private:
  double pid_correction(double error, double dt);
  void run_analysis();

  ControllerConfig config_;
  TransferFunction transfer_;
  Phase phase_ = Phase::kCollect;
  Phase last_phase_ = Phase::kCollect;
  PidState pid_state_;
  TimeSeries error_log_;
  std::optional<cancel::Analysis> analysis_;
  std::optional<cancel::CancellationCycle> chosen_;
  std::optional<std::size_t> previous_index_;
  double last_cancellation_rpm_ = 0.0;
};

}  // namespace ceeds::control
