#include "ceeds/matrix_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ceeds/error.hpp"

namespace ceeds::mp {
namespace {

void check_window(std::size_t n, std::size_t m) {
  if (m < 2) {
    throw Error(ErrorCode::kInvalidInput, "window length must be at least 2");
  }
  if (n < m) {
    throw Error(ErrorCode::kInvalidInput, "series of length " + std::to_string(n) +
                                              " is shorter than window " + std::to_string(m));
  }
}

void check_admissible(std::size_t n, std::size_t m, std::size_t exclusion_radius) {
  check_window(n, m);
  const std::size_t count = n - m + 1;
  if (count < 2 * exclusion_radius + 2) {
    throw Error(ErrorCode::kInvalidInput,
                "no admissible neighbor: " + std::to_string(count) +
                    " subsequences with exclusion radius " + std::to_string(exclusion_radius));
  }
}

struct Moments {
  double mean;
  double sum_sq_dev;
};

// Two-pass; depends only on window content, so equal windows give equal bits.
Moments direct_moments(std::span<const double> w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  const double mean = sum / static_cast<double>(w.size());
  double ss = 0.0;
  for (double v : w) ss += (v - mean) * (v - mean);
  return {mean, ss};
}

double stddev_from(double sum_sq_dev, std::size_t m) {
  return std::sqrt(std::max(sum_sq_dev, 0.0) / static_cast<double>(m));
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double clamp_distance(double d, std::size_t m) {
  return std::min(d, 2.0 * std::sqrt(static_cast<double>(m)));
}

}  // namespace

std::size_t default_exclusion_radius(std::size_t m) noexcept { return (m + 1) / 2; }

WindowStats compute_window_stats(std::span<const double> series, std::size_t m) {
  check_window(series.size(), m);
  const std::size_t count = series.size() - m + 1;
  const double dm = static_cast<double>(m);

  WindowStats stats;
  stats.window_length = m;
  stats.means.resize(count);
  stats.stddevs.resize(count);
  stats.flat_flags.resize(count);

  const Moments first = direct_moments(series.subspan(0, m));
  double mean = first.mean;
  double ss = first.sum_sq_dev;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) {
      const double out = series[i - 1];
      const double in = series[i + m - 1];
      const double next_mean = mean + (in - out) / dm;
      ss += (in - out) * (in - next_mean + out - mean);
      mean = next_mean;
    }
    double sd = stddev_from(ss, m);
    // Rolling updates leave residue on (near-)flat windows; settle those exactly.
    if (sd < 1e-4) {
      const Moments exact = direct_moments(series.subspan(i, m));
      mean = exact.mean;
      ss = exact.sum_sq_dev;
      sd = stddev_from(ss, m);
    }
    stats.means[i] = mean;
    stats.stddevs[i] = sd;
    stats.flat_flags[i] = sd < kFlatEpsilon;
  }
  return stats;
}

void znormalize(std::span<const double> window, std::span<double> out) {
  const Moments mo = direct_moments(window);
  const double sd = stddev_from(mo.sum_sq_dev, window.size());
  if (sd < kFlatEpsilon) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (std::size_t k = 0; k < window.size(); ++k) out[k] = (window[k] - mo.mean) / sd;
}

double subsequence_distance(std::span<const double> series, std::size_t i, std::size_t j,
                            std::size_t m) {
  check_window(series.size(), m);
  const std::size_t count = series.size() - m + 1;
  if (i >= count || j >= count) {
    throw Error(ErrorCode::kInvalidInput, "subsequence index out of range");
  }
  if (i == j) return 0.0;
  std::vector<double> zi(m), zj(m);
  znormalize(series.subspan(i, m), zi);
  znormalize(series.subspan(j, m), zj);
  return clamp_distance(euclidean(zi, zj), m);
}

MatrixProfile brute_force_profile(std::span<const double> series, std::size_t m,
                                  std::size_t exclusion_radius) {
  check_admissible(series.size(), m, exclusion_radius);
  const std::size_t count = series.size() - m + 1;

  std::vector<double> z(count * m);
  for (std::size_t i = 0; i < count; ++i) {
    znormalize(series.subspan(i, m), std::span<double>(z).subspan(i * m, m));
  }
  auto row = [&](std::size_t i) { return std::span<const double>(z).subspan(i * m, m); };

  MatrixProfile profile;
  profile.window_length = m;
  profile.exclusion_radius = exclusion_radius;
  profile.distances.assign(count, std::numeric_limits<double>::infinity());
  profile.neighbor_indices.assign(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap <= exclusion_radius) continue;
      const double d = clamp_distance(euclidean(row(i), row(j)), m);
      if (d < profile.distances[i]) {
        profile.distances[i] = d;
        profile.neighbor_indices[i] = j;
      }
    }
  }
  return profile;
}

MatrixProfile mpx(std::span<const double> series, std::size_t m, std::size_t exclusion_radius) {
  check_admissible(series.size(), m, exclusion_radius);
  const std::size_t n = series.size();
  const std::size_t count = n - m + 1;
  const double dm = static_cast<double>(m);

  const WindowStats stats = compute_window_stats(series, m);
  const auto& mu = stats.means;
  const auto& flat = stats.flat_flags;

  // Inverse window norms and the streaming update terms.
  std::vector<double> inv_norm(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    if (!flat[i]) inv_norm[i] = 1.0 / (stats.stddevs[i] * std::sqrt(dm));
  }
  std::vector<double> df(count, 0.0), dg(count, 0.0);
  for (std::size_t i = 1; i < count; ++i) {
    df[i] = (series[i + m - 1] - series[i - 1]) / 2.0;
    dg[i] = (series[i + m - 1] - mu[i]) + (series[i - 1] - mu[i - 1]);
  }

  // Best squared distance per row; squared distance is 2m(1 - rho), with the
  // flat-window rules giving 0 (both) or m (one).
  std::vector<double> best(count, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best_idx(count, 0);
  auto offer = [&](std::size_t row, std::size_t col, double sq) {
    if (sq < best[row] || (sq == best[row] && col < best_idx[row])) {
      best[row] = sq;
      best_idx[row] = col;
    }
  };

  for (std::size_t diag = exclusion_radius + 1; diag < count; ++diag) {
    double cov = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      cov += (series[diag + k] - mu[diag]) * (series[k] - mu[0]);
    }
    for (std::size_t i = 0; i + diag < count; ++i) {
      const std::size_t j = i + diag;
      if (i > 0) cov += df[i] * dg[j] + df[j] * dg[i];
      double sq;
      if (flat[i] && flat[j]) {
        sq = 0.0;
      } else if (flat[i] || flat[j]) {
        sq = dm;
      } else {
        const double rho = std::clamp(cov * inv_norm[i] * inv_norm[j], -1.0, 1.0);
        sq = 2.0 * dm * (1.0 - rho);
      }
      offer(i, j, sq);
      offer(j, i, sq);
    }
  }

  MatrixProfile profile;
  profile.window_length = m;
  profile.exclusion_radius = exclusion_radius;
  profile.neighbor_indices = std::move(best_idx);
  profile.distances.resize(count);
  // The search runs in correlation space; the reported distance for the
  // winning pair is evaluated directly so near-zero distances stay exact.
  std::vector<double> zi(m), zj(m);
  for (std::size_t i = 0; i < count; ++i) {
    znormalize(series.subspan(i, m), zi);
    znormalize(series.subspan(profile.neighbor_indices[i], m), zj);
    profile.distances[i] = clamp_distance(euclidean(zi, zj), m);
  }
  return profile;
}

std::vector<double> distance_profile(std::span<const double> series,
                                     std::span<const double> query) {
  const std::size_t m = query.size();
  if (m == 0 || m > series.size()) {
    throw Error(ErrorCode::kInvalidInput, "query must be non-empty and no longer than the series");
  }
  const std::size_t count = series.size() - m + 1;
  std::vector<double> zq(m), zw(m);
  znormalize(query, zq);
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    znormalize(series.subspan(j, m), zw);
    out[j] = clamp_distance(euclidean(zq, zw), m);
  }
  return out;
}

}  // namespace ceeds::mp
