#include "nlpmm/predictor.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "nlpmm/util.hpp"

namespace nlpmm {

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::Gmm: return "gmm";
    case Variant::Pmm: return "pmm";
    case Variant::Nlpmm: return "nlpmm";
    case Variant::NlpmmTb: return "nlpmm-tb";
    case Variant::NlpmmDc: return "nlpmm-dc";
  }
  throw std::invalid_argument("bad variant");
}

Variant variant_from_string(const std::string& text) {
  if (text == "gmm") return Variant::Gmm;
  if (text == "pmm") return Variant::Pmm;
  if (text == "nlpmm") return Variant::Nlpmm;
  if (text == "nlpmm-tb") return Variant::NlpmmTb;
  if (text == "nlpmm-dc") return Variant::NlpmmDc;
  throw std::invalid_argument("unknown variant: " + text);
}

bool is_time_aware(Variant variant) {
  return variant == Variant::NlpmmTb || variant == Variant::NlpmmDc;
}

namespace {

std::vector<BlendExample> make_blend_examples(std::span<const Trajectory> trajectories,
                                              const GlobalMarkovModel& global,
                                              const PersonalMarkovModel& personal) {
  std::vector<BlendExample> examples;
  for (const Trajectory& t : trajectories) {
    const std::vector<LocationId> seq = location_sequence(t);
    for (std::size_t i = 1; i < seq.size(); ++i) {
      std::span<const LocationId> context(seq.data(), i);
      examples.push_back(BlendExample{global.predict(context),
                                      personal.predict(t.object, context), seq[i]});
    }
  }
  return examples;
}

}  // namespace

CoreModel CoreModel::train(std::span<const Trajectory> trajectories,
                           std::uint32_t location_count, int order,
                           double blend_holdout, std::uint64_t seed) {
  CoreModel model;
  model.trajectory_count = trajectories.size();

  std::vector<Trajectory> fit_pool;   // trajectories the models are trained on
  std::vector<Trajectory> held_out;   // trajectories the blend is fitted on
  if (blend_holdout > 0.0 && trajectories.size() >= 2) {
    Rng rng(mix_seed(seed, 0x626c656eULL));
    for (const Trajectory& t : trajectories) {
      (rng.unit() < blend_holdout ? held_out : fit_pool).push_back(t);
    }
    if (fit_pool.empty() || held_out.empty()) {
      fit_pool.assign(trajectories.begin(), trajectories.end());
      held_out.clear();
    }
  } else {
    fit_pool.assign(trajectories.begin(), trajectories.end());
  }

  std::vector<std::vector<LocationId>> sequences;
  sequences.reserve(fit_pool.size());
  for (const Trajectory& t : fit_pool) sequences.push_back(location_sequence(t));

  model.global = GlobalMarkovModel::train(sequences, location_count, order);
  model.personal = PersonalMarkovModel::train(fit_pool, location_count, order);

  const std::vector<BlendExample> examples = make_blend_examples(
      held_out.empty() ? std::span<const Trajectory>(fit_pool)
                       : std::span<const Trajectory>(held_out),
      model.global, model.personal);
  if (!examples.empty()) {
    model.blend = fit_blend(examples, location_count);
  }
  return model;
}

CoreModel::Output CoreModel::predict(ObjectId object,
                                     std::span<const LocationId> context,
                                     Variant variant) const {
  if (context.empty()) throw std::invalid_argument("context must be non-empty");
  Output out;
  switch (variant) {
    case Variant::Gmm: {
      out.scores = global.predict(context);
      out.global_info = !is_zero_vector(out.scores);
      out.covered = out.global_info;
      break;
    }
    case Variant::Pmm: {
      out.scores = personal.predict(object, context);
      out.personal_info = !is_zero_vector(out.scores);
      out.covered = out.personal_info;
      break;
    }
    default: {
      const ProbabilityVector g = global.predict(context);
      const ProbabilityVector p = personal.predict(object, context);
      out.global_info = !is_zero_vector(g);
      out.personal_info = !is_zero_vector(p);
      out.covered = out.global_info || out.personal_info;
      out.scores = blend_predict(blend, g, p);
      break;
    }
  }
  return out;
}

namespace {

TemporalModel build_time_binning(const std::vector<Trajectory>& trajectories,
                                 std::uint32_t location_count,
                                 const TrainConfig& config) {
  TemporalModel temporal;
  temporal.bins = config.bin_config();
  temporal.seed = config.seed;
  const std::vector<BinnedTrajectory> binned = assign_bins(trajectories, temporal.bins);

  std::vector<std::vector<Trajectory>> per_bin(config.bin_count);
  for (const BinnedTrajectory& bt : binned) {
    per_bin[bt.bin].push_back(bt.trajectory);
  }
  temporal.per_bin.reserve(config.bin_count);
  for (int b = 0; b < config.bin_count; ++b) {
    temporal.per_bin.push_back(CoreModel::train(per_bin[b], location_count,
                                                config.order, config.blend_holdout,
                                                mix_seed(config.seed, b)));
  }
  return temporal;
}

// Restriction of the trajectories to a set of bins: maximal runs of units
// whose bin belongs to the set. With every bin in the set this is the
// original trajectory list, so a single cluster reproduces the plain model.
std::vector<Trajectory> restrict_to_bins(const std::vector<Trajectory>& trajectories,
                                         const std::vector<BinId>& bins,
                                         const TimeBinConfig& config) {
  std::vector<char> member(static_cast<std::size_t>(config.bin_count), 0);
  for (BinId b : bins) member[b] = 1;
  std::vector<Trajectory> out;
  for (const Trajectory& t : trajectories) {
    Trajectory current{t.object, {}};
    for (const TrajectoryUnit& u : t.units) {
      if (member[bin_of(u.time, config)]) {
        current.units.push_back(u);
      } else if (!current.units.empty()) {
        out.push_back(std::move(current));
        current = Trajectory{t.object, {}};
      }
    }
    if (!current.units.empty()) out.push_back(std::move(current));
  }
  return out;
}

TemporalModel build_distributions_clustering(const std::vector<Trajectory>& trajectories,
                                             std::uint32_t location_count,
                                             const TrainConfig& config) {
  if (config.cluster_count < 1 || config.cluster_count > config.bin_count) {
    throw std::invalid_argument("cluster count must be in [1, bin count]");
  }
  TemporalModel temporal;
  temporal.bins = config.bin_config();
  temporal.seed = config.seed;
  temporal.cluster_count = config.cluster_count;
  const int bin_count = config.bin_count;
  const std::vector<BinnedTrajectory> binned = assign_bins(trajectories, temporal.bins);
  const std::vector<TransitionDistribution> dists =
      transition_distributions(binned, location_count, bin_count);

  temporal.assignment.resize(location_count);
  temporal.pool_index.assign(location_count,
                             std::vector<int>(config.cluster_count, -1));
  std::map<std::vector<BinId>, int> pool_by_bins;
  for (std::uint32_t l = 0; l < location_count; ++l) {
    std::vector<ProbabilityVector> rows(bin_count);
    for (int b = 0; b < bin_count; ++b) {
      rows[b] = dists[static_cast<std::size_t>(l) * bin_count + b].vector;
    }
    temporal.assignment[l] =
        cluster_bins(rows, config.cluster_count, config.max_cluster_iterations,
                     mix_seed(config.seed, l));

    for (int c = 0; c < config.cluster_count; ++c) {
      std::vector<BinId> members;
      for (int b = 0; b < bin_count; ++b) {
        if (temporal.assignment[l][b] == c) members.push_back(b);
      }
      if (members.empty()) continue;
      auto it = pool_by_bins.find(members);
      if (it == pool_by_bins.end()) {
        ClusterPool pool;
        pool.bins = members;
        pool.model = CoreModel::train(
            restrict_to_bins(trajectories, members, temporal.bins), location_count,
            config.order, config.blend_holdout,
            mix_seed(config.seed, pool_by_bins.size()));
        temporal.pools.push_back(std::move(pool));
        it = pool_by_bins.emplace(members, static_cast<int>(temporal.pools.size()) - 1)
                 .first;
      }
      temporal.pool_index[l][c] = it->second;
    }
  }
  return temporal;
}

}  // namespace

Model train_model(const std::vector<Trajectory>& trajectories,
                  std::uint32_t location_count, const TrainConfig& config) {
  if (config.order < 1) throw std::invalid_argument("order must be >= 1");
  if (trajectories.empty()) throw std::invalid_argument("no training trajectories");
  config.bin_config().validate();

  Model model;
  model.variant = config.variant;
  model.location_count = location_count;
  model.order = config.order;
  model.base = CoreModel::train(trajectories, location_count, config.order,
                                config.blend_holdout, config.seed);
  if (config.variant == Variant::NlpmmTb) {
    model.temporal = build_time_binning(trajectories, location_count, config);
  } else if (config.variant == Variant::NlpmmDc) {
    model.temporal =
        build_distributions_clustering(trajectories, location_count, config);
  }
  return model;
}

Model train_model(const TrajectoryStore& store, const TrainConfig& config) {
  Model model = train_model(store.trajectories, store.location_count(), config);
  model.locations = store.locations;
  model.objects = store.objects;
  return model;
}

Prediction predict(const Model& model, ObjectId object,
                   std::span<const TrajectoryUnit> context, std::size_t k,
                   const std::vector<LocationId>* restrict_to) {
  if (context.empty()) throw std::invalid_argument("context must be non-empty");
  if (k == 0) throw std::invalid_argument("k must be >= 1");

  std::vector<LocationId> locations;
  locations.reserve(context.size());
  for (const TrajectoryUnit& u : context) locations.push_back(u.location);

  const CoreModel* routed = &model.base;
  Variant core_variant = model.variant;
  if (is_time_aware(model.variant)) {
    core_variant = Variant::Nlpmm;
    const TemporalModel& temporal = *model.temporal;
    const TrajectoryUnit& last = context.back();
    const BinId bin = bin_of(last.time, temporal.bins);
    if (model.variant == Variant::NlpmmTb) {
      routed = &temporal.per_bin[bin];
    } else {
      routed = nullptr;
      if (last.location < temporal.assignment.size()) {
        const int cluster = temporal.assignment[last.location][bin];
        const int pool = temporal.pool_index[last.location][cluster];
        if (pool >= 0) routed = &temporal.pools[pool].model;
      }
    }
  }

  Prediction prediction;
  CoreModel::Output output;
  if (routed != nullptr) {
    output = routed->predict(object, locations, core_variant);
    prediction.covered = output.covered;
  }
  if (!prediction.covered && is_time_aware(model.variant)) {
    // sub-model had nothing for this query; fall back to the plain model
    output = model.base.predict(object, locations, Variant::Nlpmm);
    prediction.used_fallback = true;
  }
  prediction.informative = output.covered;
  prediction.ranked = top_k(output.scores, k, restrict_to);
  prediction.scores.reserve(prediction.ranked.size());
  for (LocationId l : prediction.ranked) prediction.scores.push_back(output.scores[l]);
  return prediction;
}

}  // namespace nlpmm
