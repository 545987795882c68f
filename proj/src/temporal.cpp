#include "nlpmm/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlpmm/util.hpp"

namespace nlpmm {

void TimeBinConfig::validate() const {
  if (bin_count < 1) throw std::invalid_argument("bin count must be >= 1");
  if (span_seconds <= 0) throw std::invalid_argument("span must be positive");
  if (span_seconds % bin_count != 0) {
    throw std::invalid_argument("span must divide into equal bins");
  }
}

BinId bin_of(Timestamp t, const TimeBinConfig& config) {
  const std::int64_t span = config.span_seconds;
  std::int64_t local = (t + config.utc_offset_seconds) % span;
  if (local < 0) local += span;  // euclidean remainder
  return static_cast<BinId>(local / config.bin_width());
}

std::vector<BinnedTrajectory> assign_bins(const std::vector<Trajectory>& trajectories,
                                          const TimeBinConfig& config) {
  config.validate();
  std::vector<BinnedTrajectory> out;
  for (const Trajectory& t : trajectories) {
    BinnedTrajectory current;
    for (const TrajectoryUnit& u : t.units) {
      const BinId bin = bin_of(u.time, config);
      if (current.trajectory.units.empty() || bin == current.bin) {
        current.bin = bin;
        current.trajectory.object = t.object;
        current.trajectory.units.push_back(u);
      } else {
        out.push_back(std::move(current));
        current = BinnedTrajectory{bin, Trajectory{t.object, {u}}};
      }
    }
    if (!current.trajectory.units.empty()) out.push_back(std::move(current));
  }
  return out;
}

std::vector<TransitionDistribution> transition_distributions(
    const std::vector<BinnedTrajectory>& binned, std::uint32_t location_count,
    int bin_count) {
  std::vector<TransitionDistribution> out(
      static_cast<std::size_t>(location_count) * bin_count);
  for (std::uint32_t l = 0; l < location_count; ++l) {
    for (int b = 0; b < bin_count; ++b) {
      auto& cell = out[static_cast<std::size_t>(l) * bin_count + b];
      cell.location = l;
      cell.bin = b;
      cell.vector.assign(location_count, 0.0);
    }
  }
  for (const BinnedTrajectory& bt : binned) {
    const auto& units = bt.trajectory.units;
    for (std::size_t i = 0; i + 1 < units.size(); ++i) {
      auto& cell =
          out[static_cast<std::size_t>(units[i].location) * bin_count + bt.bin];
      cell.vector.at(units[i + 1].location) += 1.0;
    }
  }
  for (auto& cell : out) {
    double total = 0.0;
    for (double x : cell.vector) total += x;
    if (total > 0.0) {
      for (double& x : cell.vector) x /= total;
    }
  }
  return out;
}

double cosine_similarity(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.size() != q.size()) throw std::invalid_argument("vector length mismatch");
  double dot = 0.0, pp = 0.0, qq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * q[i];
    pp += p[i] * p[i];
    qq += q[i] * q[i];
  }
  if (pp == 0.0 || qq == 0.0) return 0.0;
  return dot / (std::sqrt(pp) * std::sqrt(qq));
}

std::vector<int> cluster_bins_from_initial(
    std::span<const ProbabilityVector> distributions,
    std::span<const std::size_t> initial_bins, int max_iterations) {
  const std::size_t bin_count = distributions.size();
  const int cluster_count = static_cast<int>(initial_bins.size());
  if (cluster_count < 1 || static_cast<std::size_t>(cluster_count) > bin_count) {
    throw std::invalid_argument("cluster count out of range");
  }

  std::vector<ProbabilityVector> centres;
  centres.reserve(cluster_count);
  for (std::size_t bin : initial_bins) centres.push_back(distributions[bin]);

  std::vector<int> assignment(bin_count, 0);
  std::vector<int> previous(bin_count, -1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    // assign each bin to the centre with maximum similarity; ties and
    // no-information bins go to the lowest cluster index
    for (std::size_t b = 0; b < bin_count; ++b) {
      int best = 0;
      double best_sim = cosine_similarity(distributions[b], centres[0]);
      for (int c = 1; c < cluster_count; ++c) {
        const double sim = cosine_similarity(distributions[b], centres[c]);
        if (sim > best_sim) {
          best_sim = sim;
          best = c;
        }
      }
      assignment[b] = best;
    }
    if (assignment == previous) break;
    previous = assignment;

    // centre = normalized mean of member vectors; empty clusters keep their
    // previous centre
    for (int c = 0; c < cluster_count; ++c) {
      ProbabilityVector mean(distributions.empty() ? 0 : distributions[0].size(), 0.0);
      std::size_t members = 0;
      for (std::size_t b = 0; b < bin_count; ++b) {
        if (assignment[b] != c) continue;
        ++members;
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += distributions[b][j];
      }
      if (members == 0) continue;
      double total = 0.0;
      for (double x : mean) total += x;
      if (total > 0.0) {
        for (double& x : mean) x /= total;
      }
      centres[c] = std::move(mean);
    }
  }
  return assignment;
}

std::vector<int> cluster_bins(std::span<const ProbabilityVector> distributions,
                              int cluster_count, int max_iterations,
                              std::uint64_t seed) {
  const std::size_t bin_count = distributions.size();
  if (cluster_count < 1 || static_cast<std::size_t>(cluster_count) > bin_count) {
    throw std::invalid_argument("cluster count out of range");
  }

  // Seed centres from bins that carry information; pad with the lowest-index
  // empty bins when there are fewer informative bins than clusters.
  std::vector<std::size_t> informative;
  std::vector<std::size_t> empty;
  for (std::size_t b = 0; b < bin_count; ++b) {
    if (is_zero_vector(distributions[b])) {
      empty.push_back(b);
    } else {
      informative.push_back(b);
    }
  }
  Rng rng(seed);
  std::vector<std::size_t> initial;
  if (informative.size() >= static_cast<std::size_t>(cluster_count)) {
    for (std::size_t idx :
         rng.sample_without_replacement(informative.size(), cluster_count)) {
      initial.push_back(informative[idx]);
    }
  } else {
    initial = informative;
    for (std::size_t i = 0; initial.size() < static_cast<std::size_t>(cluster_count); ++i) {
      initial.push_back(empty[i]);
    }
  }
  return cluster_bins_from_initial(distributions, initial, max_iterations);
}

}  // namespace nlpmm
