#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nlpmm/markov.hpp"
#include "nlpmm/types.hpp"

namespace nlpmm {

using BinId = int;

// Equal subdivision of a cycle (a day by default) into bin_count bins.
// utc_offset_seconds shifts timestamps into local time before binning.
struct TimeBinConfig {
  std::int64_t span_seconds = 86400;
  int bin_count = 24;
  std::int64_t utc_offset_seconds = 0;

  void validate() const;
  std::int64_t bin_width() const { return span_seconds / bin_count; }
};

BinId bin_of(Timestamp t, const TimeBinConfig& config);

struct BinnedTrajectory {
  BinId bin = 0;
  Trajectory trajectory;
};

// Splits each trajectory into maximal runs of units falling in the same bin.
// Sub-trajectories keep their object and relative order; singletons are kept.
std::vector<BinnedTrajectory> assign_bins(const std::vector<Trajectory>& trajectories,
                                          const TimeBinConfig& config);

// First-order transition distribution out of one location within one bin.
struct TransitionDistribution {
  LocationId location = 0;
  BinId bin = 0;
  ProbabilityVector vector;  // normalized, or all-zero for an empty cell
};

// One entry per (location, bin), location-major: index = location * M + bin.
std::vector<TransitionDistribution> transition_distributions(
    const std::vector<BinnedTrajectory>& binned, std::uint32_t location_count,
    int bin_count);

// Dot product over norm product; 0 when either vector is all-zero.
double cosine_similarity(const ProbabilityVector& p, const ProbabilityVector& q);

// K-means-style clustering of one location's M bin distributions under cosine
// similarity, seeded from cluster_count distinct randomly chosen bins (bins
// with information preferred). Returns the bin -> cluster assignment.
// Deterministic given the seed. Throws when cluster_count is outside [1, M].
std::vector<int> cluster_bins(std::span<const ProbabilityVector> distributions,
                              int cluster_count, int max_iterations,
                              std::uint64_t seed);

// Same loop with explicit initial centre bins; exposed so tests can enumerate
// every seeding.
std::vector<int> cluster_bins_from_initial(
    std::span<const ProbabilityVector> distributions,
    std::span<const std::size_t> initial_bins, int max_iterations);

}  // namespace nlpmm
