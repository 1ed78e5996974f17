#include <cmath>
#include <random>
#include <vector>

#include "ceeds/control.hpp"
#include "ceeds/error.hpp"
#include "doctest.h"

using namespace ceeds;
using namespace ceeds::control;

TEST_CASE("pid proportional and integral steps") {
  const PidGains g{.kp = 0.1, .ki = 1.0, .kd = 0.0, .integral_limit = 100.0};
  auto a = pid_step({}, g, 1.0, 0.05);
  CHECK(a.contribution == doctest::Approx(0.15).epsilon(1e-14));
  auto b = pid_step(a.state, g, 1.0, 0.05);
  CHECK(b.contribution == doctest::Approx(0.20).epsilon(1e-14));
  CHECK(b.state.integral == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("pid derivative starts on the second step") {
  const PidGains g{.kp = 0.0, .ki = 0.0, .kd = 0.5, .integral_limit = 0.0};
  auto a = pid_step({}, g, 2.0, 0.1);
  CHECK(a.contribution == 0.0);
  CHECK(a.state.initialized);
  auto b = pid_step(a.state, g, 3.0, 0.1);
  CHECK(b.contribution == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("pid integral is clamped") {
  const PidGains g{.kp = 0.0, .ki = 1.0, .kd = 0.0, .integral_limit = 0.3};
  PidState s;
  for (int i = 0; i < 50; ++i) s = pid_step(s, g, 10.0, 0.05).state;
  CHECK(s.integral == 0.3);
  for (int i = 0; i < 50; ++i) s = pid_step(s, g, -10.0, 0.05).state;
  CHECK(s.integral == -0.3);
}

TEST_CASE("pid input validation") {
  CHECK_THROWS_AS(pid_step({}, {}, 1.0, 0.0), Error);
  CHECK_THROWS_AS(pid_step({}, {}, NAN, 0.05), Error);
}

TEST_CASE("transfer fit and inverse") {
  const std::vector<CalibrationPoint> pts{{0, 0}, {50, 100}, {100, 200}};
  const auto tf = fit_transfer(pts);
  CHECK(tf.slope() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(tf.intercept()) <= 1e-12);
  CHECK(tf.inverse(120) == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(tf.duty_max() == 100.0);
  CHECK(tf.clamp_duty(150) == 100.0);
  CHECK(tf.clamp_duty(-3) == 0.0);
  CHECK(tf.rpm_to_duty_delta(50) == doctest::Approx(25.0).epsilon(1e-14));
}

TEST_CASE("transfer fit failures") {
  const std::vector<CalibrationPoint> same_duty{{10, 1}, {10, 2}, {10, 3}};
  try {
    fit_transfer(same_duty);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateFit);
  }
  const std::vector<CalibrationPoint> falling{{0, 10}, {10, 5}, {20, 0}};
  try {
    fit_transfer(falling);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonInvertible);
  }
  CHECK_THROWS_AS(TransferFunction(0.0, 0.0, 10.0), Error);
}

namespace {

ControllerConfig small_config() {
  ControllerConfig c;
  c.gains = {};
  c.km = 1.0;
  c.setpoint_rpm = 400.0;
  c.analysis.window_length = 4;
  c.analysis.analysis_cutoff = 60;
  c.hold_samples = 5;
  c.cancellation_lead = 1;
  return c;
}

// Period-10 error pattern: a -50 RPM dip for three samples.
double patterned_measurement(std::size_t t) {
  const std::size_t k = t % 10;
  return 400.0 + (k < 3 ? -50.0 + 2.0 * static_cast<double>(k) : 0.1 * static_cast<double>(k));
}

}  // namespace

TEST_CASE("controller walks collect, hold, apply") {
  const TransferFunction tf(2.0, 0.0, 500.0);
  CeedsController c(small_config(), tf);
  const double ff = tf.inverse(400.0);
  for (std::size_t t = 0; t < 60; ++t) {
    CHECK(c.phase() == Phase::kCollect);
    CHECK(c.step(patterned_measurement(t), t, 0.05) == doctest::Approx(ff));
  }
  CHECK(c.phase() == Phase::kHold);
  CHECK(c.error_log().size() == 60);
  REQUIRE(c.analysis());
  CHECK_FALSE(c.chosen());
  for (std::size_t t = 60; t < 65; ++t) {
    CHECK(c.step(patterned_measurement(t), t, 0.05) == ff);
    CHECK(c.last_phase() == Phase::kHold);
  }
  REQUIRE(c.analysis()->chosen);
  const double duty = c.step(patterned_measurement(65), 65, 0.05);
  CHECK(c.phase() == Phase::kApply);
  REQUIRE(c.chosen());
  CHECK(c.chosen()->modal_period() == 10);
  const double m = c.chosen()->at(66);
  CHECK(c.last_cancellation_rpm() == m);
  CHECK(duty == doctest::Approx(tf.clamp_duty(ff + m / 2.0)));
  // The sample after the dip starts, so the cycle should be pushing speed up.
  CHECK(c.chosen()->at(60) > 40.0);
}

TEST_CASE("apply adds km times the cycle through the inverse slope") {
  const TransferFunction tf(2.0, 0.0, 500.0);
  auto cfg = small_config();
  cfg.km = 0.5;
  CeedsController c(cfg, tf);
  for (std::size_t t = 0; t < 66; ++t) c.step(patterned_measurement(t), t, 0.05);
  REQUIRE(c.phase() == Phase::kApply);
  for (std::size_t t = 66; t < 90; ++t) {
    const double duty = c.step(400.0, t, 0.05);
    CHECK(duty == doctest::Approx(tf.clamp_duty(200.0 + 0.5 * c.chosen()->at(t + 1) / 2.0)));
  }
}

TEST_CASE("controller falls back when the log has no usable motif") {
  const TransferFunction tf(2.0, 0.0, 500.0);
  auto cfg = small_config();
  cfg.analysis.min_amplitude = 1000.0;
  CeedsController c(cfg, tf);
  for (std::size_t t = 0; t < 70; ++t) c.step(patterned_measurement(t), t, 0.05);
  CHECK(c.phase() == Phase::kFallbackPidf);
  CHECK_FALSE(c.chosen());
  CHECK(c.last_cancellation_rpm() == 0.0);
}

TEST_CASE("controller rejects out-of-sequence samples and bad readings") {
  CeedsController c(small_config(), TransferFunction(2.0, 0.0, 500.0));
  CHECK_THROWS_AS(c.step(400.0, 1, 0.05), Error);
  c.step(400.0, 0, 0.05);
  CHECK_THROWS_AS(c.step(400.0, 0, 0.05), Error);
  CHECK_THROWS_AS(c.step(INFINITY, 1, 0.05), Error);
}

TEST_CASE("phase names") {
  CHECK(to_string(Phase::kCollect) == "collect");
  CHECK(to_string(Phase::kHold) == "hold");
  CHECK(to_string(Phase::kApply) == "apply");
  CHECK(to_string(Phase::kFallbackPidf) == "fallback");
}

TEST_CASE("pid reference values") {
  CHECK(pid_step({}, {.kp = 2.0}, 3.0, 0.05).contribution == 6.0);
  CHECK(pid_step({}, {.kp = 2.0, .ki = 1.0, .kd = 1.0, .integral_limit = 1.0}, 0.0, 0.05)
            .contribution == 0.0);
  const PidGains integ{.kp = 0.0, .ki = 1.0, .kd = 0.0, .integral_limit = INFINITY};
  const auto a = pid_step({}, integ, 3.0, 0.05);
  const auto b = pid_step(a.state, integ, 3.0, 0.05);
  CHECK(a.contribution == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(b.contribution == doctest::Approx(0.30).epsilon(1e-14));
}

TEST_CASE("flat calibration data is not invertible") {
  const std::vector<CalibrationPoint> flat{{0, 1}, {10, 1}};
  try {
    fit_transfer(flat);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonInvertible);
  }
}

TEST_CASE("noisy calibration recovers the slope") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 5.0);
  std::vector<CalibrationPoint> pts;
  for (int i = 0; i < 20; ++i) {
    const double d = 25.0 * i;
    pts.push_back({d, 2.0 * d + noise(rng)});
  }
  CHECK(std::abs(fit_transfer(pts).slope() - 2.0) < 0.1);
}

TEST_CASE("zero gains and zero km give pure feedforward in every phase") {
  const TransferFunction tf(2.0, 10.0, 500.0);
  auto cfg = small_config();
  cfg.km = 0.0;
  CeedsController c(cfg, tf);
  for (std::size_t t = 0; t < 120; ++t) {
    CHECK(c.step(patterned_measurement(t), t, 0.05) == tf.inverse(400.0));
  }
  CHECK(c.phase() == Phase::kApply);
}
