#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nlpmm/eval.hpp"
#include "nlpmm/model_io.hpp"
#include "nlpmm/predictor.hpp"
#include "nlpmm/synth.hpp"
#include "nlpmm/util.hpp"

using namespace nlpmm;

namespace {

// two orthogonal regimes: mornings rotate forward, afternoons rotate by two
SynthConfig two_regime_config(std::uint32_t m, std::uint32_t objects,
                              int per_object, std::uint64_t seed) {
  SynthConfig config;
  config.location_count = m;
  config.object_count = objects;
  config.trajectories_per_object = per_object;
  config.out_degree = 2;
  config.singleton_fraction = 0.2;
  config.max_length = 5;
  config.seed = seed;
  TransitionTable morning(m), afternoon(m);
  for (LocationId l = 0; l < m; ++l) {
    morning[l] = {{(l + 1) % m, 1.0}};
    afternoon[l] = {{(l + 2) % m, 1.0}};
  }
  config.regimes = {RegimeSpec{0, 43200, morning},
                    RegimeSpec{43200, 86400, afternoon}};
  return config;
}

std::vector<TrajectoryUnit> context_at(LocationId location, Timestamp time) {
  return {TrajectoryUnit{location, time}};
}

}  // namespace

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::Gmm, Variant::Pmm, Variant::Nlpmm, Variant::NlpmmTb,
                    Variant::NlpmmDc}) {
    CHECK(variant_from_string(to_string(v)) == v);
  }
  CHECK_THROWS_AS(variant_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("train_model validates its inputs") {
  TrainConfig config;
  CHECK_THROWS_AS(train_model(std::vector<Trajectory>{}, 3, config),
                  std::invalid_argument);
  config.order = 0;
  std::vector<Trajectory> one{Trajectory{0, {{0, 0}, {1, 60}}}};
  CHECK_THROWS_AS(train_model(one, 3, config), std::invalid_argument);
  config.order = 3;
  config.variant = Variant::NlpmmDc;
  config.cluster_count = 30;
  config.bin_count = 24;
  CHECK_THROWS_AS(train_model(one, 3, config), std::invalid_argument);
}

TEST_CASE("prediction rejects empty contexts and k = 0") {
  std::vector<Trajectory> data{Trajectory{0, {{0, 0}, {1, 60}}}};
  TrainConfig config;
  const Model model = train_model(data, 2, config);
  CHECK_THROWS_AS(predict(model, 0, {}, 1), std::invalid_argument);
  auto context = context_at(0, 120);
  CHECK_THROWS_AS(predict(model, 0, context, 0), std::invalid_argument);
}

TEST_CASE("nlpmm-tb with one bin ranks exactly like plain nlpmm") {
  auto synth = generate(two_regime_config(8, 40, 6, 21));

  TrainConfig plain;
  plain.seed = 3;
  const Model base = train_model(synth.trajectories, 8, plain);

  TrainConfig tb = plain;
  tb.variant = Variant::NlpmmTb;
  tb.bin_count = 1;
  const Model binned = train_model(synth.trajectories, 8, tb);

  for (const EvalExample& ex : make_examples(synth.trajectories)) {
    auto lhs = predict(base, ex.object, ex.context, 3);
    auto rhs = predict(binned, ex.object, ex.context, 3);
    CHECK(lhs.ranked == rhs.ranked);
    CHECK(lhs.covered == rhs.covered);
  }
}

TEST_CASE("nlpmm-dc with one cluster ranks exactly like plain nlpmm") {
  auto synth = generate(two_regime_config(8, 40, 6, 22));

  TrainConfig plain;
  plain.seed = 5;
  const Model base = train_model(synth.trajectories, 8, plain);

  TrainConfig dc = plain;
  dc.variant = Variant::NlpmmDc;
  dc.bin_count = 24;
  dc.cluster_count = 1;
  const Model clustered = train_model(synth.trajectories, 8, dc);

  for (const EvalExample& ex : make_examples(synth.trajectories)) {
    auto lhs = predict(base, ex.object, ex.context, 3);
    auto rhs = predict(clustered, ex.object, ex.context, 3);
    CHECK(lhs.ranked == rhs.ranked);
  }
}

TEST_CASE("dc on planted regimes recovers per-regime deterministic models") {
  const std::uint32_t m = 10;
  auto synth = generate(two_regime_config(m, 150, 8, 23));

  TrainConfig dc;
  dc.variant = Variant::NlpmmDc;
  dc.order = 3;
  dc.bin_count = 24;
  dc.cluster_count = 2;
  dc.seed = 11;
  const Model model = train_model(synth.trajectories, m, dc);
  REQUIRE(model.temporal.has_value());

  // recompute the per-cell distributions to know which cells carried data
  auto binned = assign_bins(synth.trajectories, dc.bin_config());
  auto dists = transition_distributions(binned, m, 24);
  auto informative = [&](LocationId l, int b) {
    return !is_zero_vector(dists[static_cast<std::size_t>(l) * 24 + b].vector);
  };

  // cells with data must cluster by regime: morning bins 0-11 on one side,
  // afternoon bins 12-23 on the other
  std::size_t checked = 0;
  for (LocationId l = 0; l < m; ++l) {
    const auto& assignment = model.temporal->assignment[l];
    int morning_cluster = -1, afternoon_cluster = -1;
    for (int b = 0; b < 24; ++b) {
      if (!informative(l, b)) continue;
      int& slot = (b < 12) ? morning_cluster : afternoon_cluster;
      if (slot == -1) slot = assignment[b];
      CHECK(assignment[b] == slot);
    }
    if (morning_cluster != -1 && afternoon_cluster != -1) {
      CHECK(morning_cluster != afternoon_cluster);
      ++checked;
    }
  }
  CHECK(checked >= m / 2);  // the check must not be vacuous

  // the same context routes to different successors by time of day; an
  // unknown object isolates the global half of each pool model
  const ObjectId stranger = 7777;
  const Timestamp morning = 9 * 3600;
  const Timestamp afternoon = 14 * 3600;
  for (LocationId l = 0; l < m; ++l) {
    if (!informative(l, 9) || !informative(l, 14)) continue;
    auto am = predict(model, stranger, context_at(l, morning), 1);
    auto pm = predict(model, stranger, context_at(l, afternoon), 1);
    REQUIRE(am.ranked.size() == 1);
    REQUIRE(pm.ranked.size() == 1);
    CHECK(am.ranked[0] == (l + 1) % m);
    CHECK(pm.ranked[0] == (l + 2) % m);
  }
}

TEST_CASE("time-aware prediction falls back to the global model on empty bins") {
  // all data in the morning of bin 8; query in an untouched bin
  std::vector<Trajectory> data;
  for (int i = 0; i < 5; ++i) {
    data.push_back(Trajectory{static_cast<ObjectId>(i),
                              {{0, 8 * 3600 + i * 10}, {1, 8 * 3600 + i * 10 + 60}}});
  }
  TrainConfig tb;
  tb.variant = Variant::NlpmmTb;
  tb.bin_count = 24;
  const Model model = train_model(data, 2, tb);

  auto routed = predict(model, 0, context_at(0, 8 * 3600 + 500), 1);
  CHECK(routed.covered);
  CHECK_FALSE(routed.used_fallback);
  CHECK(routed.ranked[0] == 1);

  auto fallback = predict(model, 0, context_at(0, 20 * 3600), 1);
  CHECK_FALSE(fallback.covered);
  CHECK(fallback.used_fallback);
  CHECK(fallback.informative);
  CHECK(fallback.ranked[0] == 1);
}

TEST_CASE("unknown objects degrade to the global half of the blend") {
  std::vector<Trajectory> data;
  for (int i = 0; i < 4; ++i) {
    data.push_back(Trajectory{static_cast<ObjectId>(i), {{0, 100}, {1, 160}}});
  }
  TrainConfig config;
  const Model model = train_model(data, 2, config);
  auto prediction = predict(model, 999, context_at(0, 3000), 1);
  CHECK(prediction.covered);
  CHECK(prediction.ranked[0] == 1);
}

TEST_CASE("model document round trips losslessly") {
  auto synth = generate(two_regime_config(6, 25, 5, 29));

  for (Variant variant : {Variant::Gmm, Variant::Pmm, Variant::Nlpmm,
                          Variant::NlpmmTb, Variant::NlpmmDc}) {
    TrainConfig config;
    config.variant = variant;
    config.bin_count = 12;
    config.cluster_count = 2;
    config.seed = 31;
    Model model = train_model(synth.trajectories, 6, config);
    model.locations = synth.locations;
    model.objects = synth.objects;

    std::ostringstream first;
    save_model(first, model);
    std::istringstream reread(first.str());
    const Model loaded = load_model(reread);

    // identical bytes when re-serialized
    std::ostringstream second;
    save_model(second, loaded);
    CHECK(first.str() == second.str());

    // identical predictions on every example
    for (const EvalExample& ex : make_examples(synth.trajectories)) {
      auto lhs = predict(model, ex.object, ex.context, 3);
      auto rhs = predict(loaded, ex.object, ex.context, 3);
      CHECK(lhs.ranked == rhs.ranked);
      CHECK(lhs.covered == rhs.covered);
      CHECK(lhs.scores == rhs.scores);
    }
  }
}

TEST_CASE("load_model rejects junk") {
  std::istringstream junk("not a model\n");
  CHECK_THROWS_AS(load_model(junk), ParseError);
}
