#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlpmm/ensemble.hpp"
#include "nlpmm/markov.hpp"
#include "nlpmm/temporal.hpp"
#include "nlpmm/trajectory.hpp"

namespace nlpmm {

enum class Variant {
  Gmm,      // global model only
  Pmm,      // personal model only
  Nlpmm,    // blended global + personal
  NlpmmTb,  // per-time-bin blended models
  NlpmmDc,  // per-cluster blended models (distributions clustering)
};

std::string to_string(Variant variant);
Variant variant_from_string(const std::string& text);
bool is_time_aware(Variant variant);

struct TrainConfig {
  Variant variant = Variant::Nlpmm;
  int order = 3;                        // N
  int bin_count = 24;                   // M
  int cluster_count = 5;                // Q
  std::int64_t span_seconds = 86400;
  std::int64_t utc_offset_seconds = 0;
  int max_cluster_iterations = 100;
  std::uint64_t seed = 0;
  // Fraction of training trajectories held out for fitting the blend; 0 fits
  // in-sample on the full training set.
  double blend_holdout = 0.0;

  TimeBinConfig bin_config() const {
    return TimeBinConfig{span_seconds, bin_count, utc_offset_seconds};
  }
};

// Blended global + personal model over one trajectory pool. Sub-models of the
// time-aware variants and the plain model are both of this form.
struct CoreModel {
  GlobalMarkovModel global;
  PersonalMarkovModel personal;
  BlendWeights blend{0.0, 0.5, 0.5};  // defaults apply when no blend examples exist
  std::size_t trajectory_count = 0;

  static CoreModel train(std::span<const Trajectory> trajectories,
                         std::uint32_t location_count, int order,
                         double blend_holdout = 0.0, std::uint64_t seed = 0);

  struct Output {
    std::vector<double> scores;
    bool global_info = false;
    bool personal_info = false;
    bool covered = false;  // any model vector carried information
  };

  Output predict(ObjectId object, std::span<const LocationId> context,
                 Variant variant) const;
};

// Pooled sub-model shared by every (location, cluster) whose member bins
// match.
struct ClusterPool {
  std::vector<BinId> bins;  // sorted
  CoreModel model;
};

struct TemporalModel {
  TimeBinConfig bins;
  std::uint64_t seed = 0;
  // TB: one model per bin.
  std::vector<CoreModel> per_bin;
  // DC: per-location bin -> cluster assignment and cluster -> pool routing.
  int cluster_count = 0;
  std::vector<std::vector<int>> assignment;  // [location][bin] -> cluster
  std::vector<std::vector<int>> pool_index;  // [location][cluster] -> pool or -1
  std::vector<ClusterPool> pools;
};

struct Model {
  Variant variant = Variant::Nlpmm;
  std::uint32_t location_count = 0;
  int order = 3;
  Interner locations;
  Interner objects;
  CoreModel base;  // the plain model; also the fallback for time-aware variants
  std::optional<TemporalModel> temporal;
};

Model train_model(const TrajectoryStore& store, const TrainConfig& config);

// Trains only the model structures (no interning tables); used internally and
// by the evaluation loop.
Model train_model(const std::vector<Trajectory>& trajectories,
                  std::uint32_t location_count, const TrainConfig& config);

struct Prediction {
  std::vector<LocationId> ranked;
  std::vector<double> scores;  // aligned with ranked
  bool covered = false;        // routed sub-model carried information
  bool informative = false;    // some model carried information after fallback
  bool used_fallback = false;
};

// context carries timestamps so the time-aware variants can route on the last
// unit; plain variants ignore the times. k must be >= 1.
Prediction predict(const Model& model, ObjectId object,
                   std::span<const TrajectoryUnit> context, std::size_t k,
                   const std::vector<LocationId>* restrict_to = nullptr);

}  // namespace nlpmm
