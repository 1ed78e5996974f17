#include "ceeds/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ceeds/error.hpp"

namespace ceeds::control {

PidOutput pid_step(const PidState& state, const PidGains& gains, double error, double dt) {
  if (!std::isfinite(error)) throw Error(ErrorCode::kInvalidInput, "PID error is not finite");
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidInput, "PID dt must be positive");

  PidOutput out;
  out.state.integral =
      std::clamp(state.integral + error * dt, -gains.integral_limit, gains.integral_limit);
  const double derivative = state.initialized ? (error - state.previous_error) / dt : 0.0;
  out.state.previous_error = error;
  out.state.initialized = true;
  out.contribution = gains.kp * error + gains.ki * out.state.integral + gains.kd * derivative;
  return out;
}

TransferFunction::TransferFunction(double slope, double intercept, double duty_max)
    : slope_(slope), intercept_(intercept), duty_max_(duty_max) {
  if (!(slope_ > 0.0) || !std::isfinite(slope_)) {
    throw Error(ErrorCode::kNonInvertible, "transfer slope must be positive");
  }
  if (!std::isfinite(intercept_) || !(duty_max_ > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "transfer intercept/domain invalid");
  }
}

double TransferFunction::clamp_duty(double duty) const noexcept {
  return std::clamp(duty, 0.0, duty_max_);
}

TransferFunction fit_transfer(std::span<const CalibrationPoint> calibration) {
  if (calibration.size() < 2) {
    throw Error(ErrorCode::kDegenerateFit, "need at least two calibration points");
  }
  const double n = static_cast<double>(calibration.size());
  double mean_x = 0.0, mean_y = 0.0, max_duty = 0.0;
  for (const auto& p : calibration) {
    mean_x += p.duty;
    mean_y += p.rpm;
    max_duty = std::max(max_duty, p.duty);
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : calibration) {
    sxx += (p.duty - mean_x) * (p.duty - mean_x);
    sxy += (p.duty - mean_x) * (p.rpm - mean_y);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kDegenerateFit, "all calibration duties are equal");
  const double slope = sxy / sxx;
  if (!(slope > 0.0)) {
    throw Error(ErrorCode::kNonInvertible,
                "fitted slope " + std::to_string(slope) + " is not positive");
  }
  return TransferFunction(slope, mean_y - slope * mean_x, max_duty);
}

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::kCollect: return "collect";
    case Phase::kHold: return "hold";
    case Phase::kApply: return "apply";
    case Phase::kFallbackPidf: return "fallback";
  }
  return "unknown";
}

CeedsController::CeedsController(ControllerConfig config, TransferFunction transfer)
    : config_(std::move(config)),
      transfer_(transfer),
      error_log_({}, config_.sample_period_ms) {
  config_.analysis.validate();
  if (!(config_.setpoint_rpm > 0.0)) {
    throw Error(ErrorCode::kConfig, "setpoint must be positive");
  }
  if (!(config_.gains.integral_limit >= 0.0)) {
    throw Error(ErrorCode::kConfig, "integral limit must be non-negative");
  }
}

double CeedsController::pid_correction(double error, double dt) {
  // PID acts on setpoint - measured.
  const PidOutput out = pid_step(pid_state_, config_.gains, -error, dt);
  pid_state_ = out.state;
  return out.contribution;
}

void CeedsController::run_analysis() {
  analysis_ = cancel::analyze_error_log(error_log_.values(), config_.analysis);
}

double CeedsController::step(double measured_rpm, std::size_t sample_index, double dt) {
  if (!std::isfinite(measured_rpm)) {
    throw Error(ErrorCode::kInvalidInput, "measured RPM is not finite");
  }
  if (previous_index_ ? sample_index != *previous_index_ + 1 : sample_index != 0) {
    throw Error(ErrorCode::kInvalidInput,
                "sample index " + std::to_string(sample_index) + " out of sequence");
  }
  previous_index_ = sample_index;

  const std::size_t cutoff = config_.analysis.analysis_cutoff;
  if (phase_ == Phase::kHold && sample_index >= cutoff + config_.hold_samples) {
    if (analysis_ && analysis_->chosen) {
      chosen_ = analysis_->chosen;
      phase_ = Phase::kApply;
    } else {
      phase_ = Phase::kFallbackPidf;
    }
  }
  last_phase_ = phase_;
  last_cancellation_rpm_ = 0.0;

  const double error = measured_rpm - config_.setpoint_rpm;
  const double feedforward = transfer_.inverse(config_.setpoint_rpm);
  double correction_rpm = 0.0;

  switch (phase_) {
    case Phase::kCollect:
      correction_rpm = pid_correction(error, dt);
      error_log_.push_back(error);
      if (error_log_.size() >= cutoff) {
        try {
          run_analysis();
        } catch (const Error&) {
          analysis_.reset();
        }
        phase_ = Phase::kHold;
      }
      break;
    case Phase::kHold:
      return transfer_.clamp_duty(feedforward);
    case Phase::kApply:
      correction_rpm = pid_correction(error, dt);
      last_cancellation_rpm_ =
          config_.km * chosen_->at(sample_index + config_.cancellation_lead);
      correction_rpm += last_cancellation_rpm_;
      break;
    case Phase::kFallbackPidf:
      correction_rpm = pid_correction(error, dt);
      break;
  }
  return transfer_.clamp_duty(feedforward + transfer_.rpm_to_duty_delta(correction_rpm));
}

}  // namespace ceeds::control
