#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ceeds {

/// Real-valued samples taken at a fixed control cadence. Sample i was taken
/// at i * sample_period_ms milliseconds after the start of the run.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> values, int sample_period_ms = 50);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  int sample_period_ms() const noexcept { return sample_period_ms_; }

  long long time_ms(std::size_t index) const noexcept {
    return static_cast<long long>(index) * sample_period_ms_;
  }

  // Throws kInvalidInput for non-finite values.
  void push_back(double value);

 private:
  std::vector<double> values_;
  int sample_period_ms_ = 50;
};

}  // namespace ceeds
