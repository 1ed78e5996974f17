#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ceeds/motif.hpp"

namespace ceeds::cancel {

/// One period of the cancellation signal: the negated motif followed by
/// zeros up to the modal period, anchored at `offset`.
struct CancellationCycle {
  std::vector<double> cycle_values;
  std::size_t offset = 0;
  int source_rank = 1;

  std::size_t modal_period() const noexcept { return cycle_values.size(); }
  double at(std::size_t sample_index) const;
};

CancellationCycle build_cycle(const motif::Motif& motif, const motif::FeatureSet& features);

/// out[t] = cycle_values[(t - offset) mod period]; periodic in both
/// directions around the offset.
std::vector<double> tile_cancellation(const CancellationCycle& cycle, std::size_t length);

/// Sum over t of |error[t] + candidate[t]|.
double retroactive_score(std::span<const double> error_log, std::span<const double> candidate);

/// Lowest retroactive score wins; equal scores go to the lower source rank.
CancellationCycle select_best(std::span<const double> error_log,
                              std::span<const CancellationCycle> candidates);

struct Analysis {
  std::vector<motif::Motif> motifs;
  std::vector<CancellationCycle> candidates;  // motifs whose period fit the window
  std::optional<CancellationCycle> chosen;
};

/// Profile, motifs, features, cycles, ranking. `chosen` is empty when no
/// motif produced a usable cycle.
Analysis analyze_error_log(std::span<const double> error_log, const motif::AnalysisConfig& config);

}  // namespace ceeds::cancel
