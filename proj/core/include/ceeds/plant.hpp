#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ceeds::plant {

/// One period of a software-injected interference signal, in RPM of speed
/// reduction per sample.
struct Waveform {
  std::vector<double> samples;

  std::size_t period() const noexcept { return samples.size(); }
};

/// Parses comma-separated segments: "V*N" repeats V N times, "ramp(A,B,S)"
/// counts from A toward B (exclusive) in steps of S.
/// "0*45,ramp(50,0,-2)" gives forty-five zeros then 50, 48, ..., 2.
Waveform parse_waveform(std::string_view spec);

double waveform_sample(const Waveform& w, std::size_t t);

/// Seeded Gaussian source. mt19937_64 is fully specified by the standard;
/// the normal transform is done here because std::normal_distribution is not
/// portable across library implementations.
class NoiseSource {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+box-muller";

  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  double gaussian(double sigma);

  friend bool operator==(const NoiseSource&, const NoiseSource&) = default;

 private:
  double uniform_open();  // (0, 1]

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct PlantParams {
  double ku = 2.0;           // steady-state RPM per unit duty
  double tau = 0.1;          // s
  double noise_sigma = 2.0;  // RPM
};

struct PlantState {
  double omega = 0.0;  // true shaft RPM
  PlantParams params;
  NoiseSource rng;
};

/// First-order motor: omega' = omega + dt/tau * (ku*duty - omega). The
/// returned measurement is omega' - disturbance + N(0, sigma).
double plant_step(PlantState& state, double duty, double disturbance_rpm, double dt);

}  // namespace ceeds::plant
