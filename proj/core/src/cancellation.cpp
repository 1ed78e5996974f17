#include "ceeds/cancellation.hpp"

#include <cmath>
#include <string>

#include "ceeds/error.hpp"
#include "ceeds/matrix_profile.hpp"

namespace ceeds::cancel {

double CancellationCycle::at(std::size_t sample_index) const {
  const std::size_t period = modal_period();
  const std::size_t phase = offset % period;
  return cycle_values[(sample_index + period - phase) % period];
}

CancellationCycle build_cycle(const motif::Motif& motif, const motif::FeatureSet& features) {
  const std::size_t m = motif.representative.size();
  if (m == 0 || features.modal_period < m) {
    throw Error(ErrorCode::kPeriodTooShort, "modal period " +
                                                std::to_string(features.modal_period) +
                                                " is shorter than motif length " +
                                                std::to_string(m));
  }
  CancellationCycle cycle;
  cycle.cycle_values.assign(features.modal_period, 0.0);
  for (std::size_t k = 0; k < m; ++k) cycle.cycle_values[k] = -motif.representative[k];
  cycle.offset = features.offset;
  cycle.source_rank = motif.rank;
  return cycle;
}

std::vector<double> tile_cancellation(const CancellationCycle& cycle, std::size_t length) {
  if (cycle.cycle_values.empty()) {
    throw Error(ErrorCode::kInvalidInput, "cancellation cycle is empty");
  }
  std::vector<double> out(length);
  for (std::size_t t = 0; t < length; ++t) out[t] = cycle.at(t);
  return out;
}

double retroactive_score(std::span<const double> error_log, std::span<const double> candidate) {
  if (error_log.size() != candidate.size()) {
    throw Error(ErrorCode::kInvalidInput, "error log and candidate lengths differ");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < error_log.size(); ++t) sum += std::abs(error_log[t] + candidate[t]);
  return sum;
}

CancellationCycle select_best(std::span<const double> error_log,
                              std::span<const CancellationCycle> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::kNoCandidate, "no cancellation candidates");
  const CancellationCycle* best = nullptr;
  double best_score = 0.0;
  for (const auto& c : candidates) {
    const double score = retroactive_score(error_log, tile_cancellation(c, error_log.size()));
    if (best == nullptr || score < best_score ||
        (score == best_score && c.source_rank < best->source_rank)) {
      best = &c;
      best_score = score;
    }
  }
  return *best;
}

Analysis analyze_error_log(std::span<const double> error_log,
                           const motif::AnalysisConfig& config) {
  Analysis result;
  const std::size_t m = config.window_length;
  const auto profile = mp::mpx(error_log, m, mp::default_exclusion_radius(m));
  result.motifs = motif::top_motifs(error_log, profile, config);
  for (const auto& mo : result.motifs) {
    try {
      result.candidates.push_back(build_cycle(mo, motif::motif_features(mo)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPeriodTooShort &&
          e.code() != ErrorCode::kInsufficientOccurrences) {
        throw;
      }
    }
  }
  if (!result.candidates.empty()) result.chosen = select_best(error_log, result.candidates);
  return result;
}

}  // namespace ceeds::cancel
