#include "ceeds/motif.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "ceeds/error.hpp"

namespace ceeds::motif {

void AnalysisConfig::validate() const {
  if (window_length < 2) throw Error(ErrorCode::kConfig, "window_length must be >= 2");
  if (motif_count < 1) throw Error(ErrorCode::kConfig, "motif_count must be >= 1");
  if (!(radius_factor > 1.0)) throw Error(ErrorCode::kConfig, "radius_factor must be > 1");
  if (!(min_amplitude >= 0.0)) throw Error(ErrorCode::kConfig, "min_amplitude must be >= 0");
  if (analysis_cutoff <= window_length) {
    throw Error(ErrorCode::kConfig, "analysis_cutoff must exceed window_length");
  }
}

double zero_distance_floor(std::size_t m) noexcept {
  // Distance at which Pearson correlation is 1 - kFlatEpsilon.
  return std::sqrt(2.0 * static_cast<double>(m) * mp::kFlatEpsilon);
}

std::vector<Motif> top_motifs(std::span<const double> series, const mp::MatrixProfile& profile,
                              const AnalysisConfig& config) {
  const std::size_t m = config.window_length;
  if (m < 2 || series.size() < m || profile.window_length != m ||
      profile.size() != series.size() - m + 1 ||
      profile.neighbor_indices.size() != profile.size()) {
    throw Error(ErrorCode::kInvalidInput, "matrix profile does not match series and window");
  }
  const std::size_t count = profile.size();
  const std::size_t radius = mp::default_exclusion_radius(m);

  std::vector<bool> excluded(count, false);
  auto exclude_around = [&](std::size_t at) {
    const std::size_t lo = at > radius ? at - radius : 0;
    const std::size_t hi = std::min(count - 1, at + radius);
    for (std::size_t k = lo; k <= hi; ++k) excluded[k] = true;
  };
  // Profile order, ties to the lower index.
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profile.distances[a] < profile.distances[b];
  });

  std::vector<Motif> motifs;
  for (std::size_t seed : order) {
    if (motifs.size() >= config.motif_count) break;
    const std::size_t partner = profile.neighbor_indices[seed];
    if (excluded[seed] || partner >= count || excluded[partner]) continue;
    if ((seed > partner ? seed - partner : partner - seed) <= radius) continue;

    const double seed_distance = profile.distances[seed];
    const double threshold =
        std::max(config.radius_factor * seed_distance, zero_distance_floor(m));
    const auto query = series.subspan(seed, m);
    const std::vector<double> dp = mp::distance_profile(series, query);

    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < count; ++j) {
      if (j != seed && j != partner && dp[j] <= threshold && !excluded[j]) {
        candidates.push_back(j);
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return dp[a] < dp[b]; });

    std::vector<std::size_t> accepted{seed, partner};
    for (std::size_t j : candidates) {
      const bool clear = std::all_of(accepted.begin(), accepted.end(), [&](std::size_t a) {
        return (a > j ? a - j : j - a) > radius;
      });
      if (clear) accepted.push_back(j);
    }
    std::sort(accepted.begin(), accepted.end());
    for (std::size_t a : accepted) exclude_around(a);

    const auto window = series.subspan(accepted.front(), m);
    const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
    if (*hi - *lo < config.min_amplitude) continue;

    Motif motif;
    motif.representative.assign(window.begin(), window.end());
    motif.occurrences = std::move(accepted);
    motif.seed_distance = seed_distance;
    motif.rank = static_cast<int>(motifs.size()) + 1;
    motifs.push_back(std::move(motif));
  }
  return motifs;
}

FeatureSet motif_features(const Motif& motif) {
  const auto& occ = motif.occurrences;
  if (occ.size() < 2) {
    throw Error(ErrorCode::kInsufficientOccurrences,
                "motif has " + std::to_string(occ.size()) + " occurrence(s); need 2");
  }
  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t k = 1; k < occ.size(); ++k) ++histogram[occ[k] - occ[k - 1]];

  // std::map iterates ascending, so strict > keeps the smallest tied gap.
  std::size_t period = 0;
  std::size_t votes = 0;
  for (const auto& [gap, n] : histogram) {
    if (n > votes) {
      period = gap;
      votes = n;
    }
  }
  return {occ.front(), period};
}

}  // namespace ceeds::motif
