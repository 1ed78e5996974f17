#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ceeds::mp {

// Windows whose population standard deviation falls below this are "flat".
// A flat window z-normalizes to the zero vector.
inline constexpr double kFlatEpsilon = 1e-8;

struct WindowStats {
  std::size_t window_length = 0;
  std::vector<double> means;
  std::vector<double> stddevs;  // population
  std::vector<bool> flat_flags;

  std::size_t size() const noexcept { return means.size(); }
};

struct MatrixProfile {
  std::vector<double> distances;
  std::vector<std::size_t> neighbor_indices;
  std::size_t window_length = 0;
  std::size_t exclusion_radius = 0;

  std::size_t size() const noexcept { return distances.size(); }
};

/// ceil(m / 2), the usual self-join exclusion radius.
std::size_t default_exclusion_radius(std::size_t m) noexcept;

/// Rolling mean and population standard deviation over every length-m window.
/// Requires m >= 2 and series.size() >= m.
WindowStats compute_window_stats(std::span<const double> series, std::size_t m);

/// Writes the z-normalized copy of `window` into `out` (same length). A flat
/// window produces all zeros.
void znormalize(std::span<const double> window, std::span<double> out);

/// z-normalized Euclidean distance between the length-m windows starting at
/// i and j. Both flat gives 0; exactly one flat gives sqrt(m).
double subsequence_distance(std::span<const double> series, std::size_t i, std::size_t j,
                            std::size_t m);

/// O(n^2 m) reference self-join. Ties resolve to the smallest neighbor index.
MatrixProfile brute_force_profile(std::span<const double> series, std::size_t m,
                                  std::size_t exclusion_radius);

/// Exact self-join streaming along the diagonals of the distance matrix with
/// incremental covariance updates. Same result contract as
/// brute_force_profile.
MatrixProfile mpx(std::span<const double> series, std::size_t m, std::size_t exclusion_radius);

/// Distance from `query` to every subsequence of `series` of the same length.
std::vector<double> distance_profile(std::span<const double> series,
                                     std::span<const double> query);

}  // namespace ceeds::mp
