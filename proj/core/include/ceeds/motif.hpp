#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ceeds/matrix_profile.hpp"

namespace ceeds::motif {

struct Motif {
  std::vector<double> representative;   // raw window at occurrences.front()
  std::vector<std::size_t> occurrences;  // strictly increasing start indices
  double seed_distance = 0.0;
  int rank = 1;
};

struct FeatureSet {
  std::size_t offset = 0;
  std::size_t modal_period = 0;
};

struct AnalysisConfig {
  std::size_t window_length = 35;
  std::size_t motif_count = 5;
  double radius_factor = 2.0;
  double min_amplitude = 0.0;  // peak-to-peak RPM; 0 disables the filter
  std::size_t analysis_cutoff = 600;

  // Throws kConfig when an invariant does not hold.
  void validate() const;
};

/// Up to config.motif_count motifs, best first. Each iteration seeds on the
/// smallest profile value outside every earlier exclusion zone, then gathers
/// further occurrences within radius_factor times the seed distance.
std::vector<Motif> top_motifs(std::span<const double> series, const mp::MatrixProfile& profile,
                              const AnalysisConfig& config);

/// Offset is the first occurrence; modal period is the most frequent gap
/// between successive occurrences, ties going to the smaller gap.
FeatureSet motif_features(const Motif& motif);

/// Smallest gap accepted when a seed pair matches exactly.
double zero_distance_floor(std::size_t m) noexcept;

}  // namespace ceeds::motif
