#include "ceeds/plant.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "ceeds/error.hpp"

namespace ceeds::plant {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t segment, std::string_view text, const std::string& why) {
  throw Error(ErrorCode::kParse, "waveform segment " + std::to_string(segment) + " '" +
                                     std::string(text) + "': " + why);
}

double parse_real(std::string_view s, std::size_t segment, std::string_view text) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(segment, text, "expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

long long parse_count(std::string_view s, std::size_t segment, std::string_view text) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(segment, text, "expected an integer count, got '" + std::string(s) + "'");
  }
  return v;
}

// Splits on commas that are not inside parentheses.
std::vector<std::string_view> split_segments(std::string_view spec) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec[i] == '(') ++depth;
    if (spec[i] == ')') --depth;
    if (spec[i] == ',' && depth == 0) {
      out.push_back(spec.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(spec.substr(start));
  return out;
}

void append_ramp(std::vector<double>& out, std::string_view body, std::size_t segment,
                 std::string_view text) {
  std::vector<std::string_view> args;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ',') {
      args.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  if (args.size() != 3) fail(segment, text, "ramp takes three arguments");
  const double from = parse_real(args[0], segment, text);
  const double to = parse_real(args[1], segment, text);
  const double step = parse_real(args[2], segment, text);
  if (step == 0.0) fail(segment, text, "ramp step must be non-zero");
  if ((to - from) * step <= 0.0) fail(segment, text, "ramp step points away from its end");
  // Index-based so non-integer steps do not accumulate drift.
  for (long long k = 0;; ++k) {
    const double v = from + static_cast<double>(k) * step;
    if (step > 0.0 ? v >= to : v <= to) break;
    out.push_back(v);
  }
}

}  // namespace

Waveform parse_waveform(std::string_view spec) {
  Waveform w;
  const auto segments = split_segments(spec);
  for (std::size_t idx = 0; idx < segments.size(); ++idx) {
    const std::size_t segment = idx + 1;
    const std::string_view text = trim(segments[idx]);
    if (text.empty()) fail(segment, text, "empty segment");

    if (text.starts_with("ramp")) {
      std::string_view rest = trim(text.substr(4));
      if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') {
        fail(segment, text, "expected ramp(A,B,S)");
      }
      append_ramp(w.samples, rest.substr(1, rest.size() - 2), segment, text);
      continue;
    }
    const auto star = text.find('*');
    if (star == std::string_view::npos) fail(segment, text, "expected V*N or ramp(A,B,S)");
    const double value = parse_real(text.substr(0, star), segment, text);
    const long long count = parse_count(text.substr(star + 1), segment, text);
    if (count <= 0) fail(segment, text, "repeat count must be positive");
    w.samples.insert(w.samples.end(), static_cast<std::size_t>(count), value);
  }
  for (double v : w.samples) {
    if (v < 0.0) {
      throw Error(ErrorCode::kParse, "waveform samples must be non-negative speed reductions");
    }
  }
  if (w.samples.empty()) throw Error(ErrorCode::kParse, "waveform is empty");
  return w;
}

double waveform_sample(const Waveform& w, std::size_t t) {
  return w.samples[t % w.period()];
}

double NoiseSource::uniform_open() {
  // 53 random bits mapped to (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseSource::gaussian(double sigma) {
  if (has_spare_) {
    has_spare_ = false;
    return sigma * spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double theta = 2.0 * std::numbers::pi * uniform_open();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return sigma * r * std::cos(theta);
}

double plant_step(PlantState& state, double duty, double disturbance_rpm, double dt) {
  if (!std::isfinite(duty)) throw Error(ErrorCode::kInvalidInput, "duty is not finite");
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidInput, "plant dt must be positive");
  const auto& p = state.params;
  state.omega += (dt / p.tau) * (p.ku * duty - state.omega);
  return state.omega - disturbance_rpm + state.rng.gaussian(p.noise_sigma);
}

}  // namespace ceeds::plant
