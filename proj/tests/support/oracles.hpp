#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ceeds::testing {

struct DirectStats {
  double mean;
  double stddev;
};

inline DirectStats direct_window_stats(std::span<const double> x, std::size_t i, std::size_t m) {
  long double sum = 0.0L;
  for (std::size_t k = 0; k < m; ++k) sum += x[i + k];
  const long double mean = sum / static_cast<long double>(m);
  long double ss = 0.0L;
  for (std::size_t k = 0; k < m; ++k) ss += (x[i + k] - mean) * (x[i + k] - mean);
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(ss / m))};
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t m = a.size();
  long double ma = 0.0L, mb = 0.0L;
  for (std::size_t k = 0; k < m; ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= m;
  mb /= m;
  long double sab = 0.0L, saa = 0.0L, sbb = 0.0L;
  for (std::size_t k = 0; k < m; ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

// sqrt(2 m (1 - rho)) for two non-flat windows.
inline double correlation_distance(std::span<const double> a, std::span<const double> b) {
  const double rho = pearson(a, b);
  return std::sqrt(std::max(0.0, 2.0 * static_cast<double>(a.size()) * (1.0 - rho)));
}

// Mode of successive gaps by exhaustive counting; ties to the smaller gap.
inline std::size_t brute_mode_gap(const std::vector<std::size_t>& occ) {
  std::size_t best_gap = 0, best_count = 0;
  for (std::size_t a = 1; a < occ.size(); ++a) {
    const std::size_t gap = occ[a] - occ[a - 1];
    std::size_t count = 0;
    for (std::size_t b = 1; b < occ.size(); ++b) count += (occ[b] - occ[b - 1]) == gap;
    if (count > best_count || (count == best_count && gap < best_gap)) {
      best_gap = gap;
      best_count = count;
    }
  }
  return best_gap;
}

}  // namespace ceeds::testing
