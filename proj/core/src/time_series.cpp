#include "ceeds/time_series.hpp"

#include <algorithm>
#include <cmath>

#include "ceeds/error.hpp"

namespace ceeds {

TimeSeries::TimeSeries(std::vector<double> values, int sample_period_ms)
    : values_(std::move(values)), sample_period_ms_(sample_period_ms) {
  if (sample_period_ms_ <= 0) {
    throw Error(ErrorCode::kInvalidInput, "sample period must be positive");
  }
  if (!std::all_of(values_.begin(), values_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kInvalidInput, "time series contains a non-finite value");
  }
}

void TimeSeries::push_back(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidInput, "time series contains a non-finite value");
  }
  values_.push_back(value);
}

}  // namespace ceeds
