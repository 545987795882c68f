#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "nlpmm/markov.hpp"
#include "nlpmm/trajectory.hpp"
#include "nlpmm/util.hpp"
#include "oracles.hpp"

using namespace nlpmm;

namespace {

constexpr LocationId A = 0, B = 1, C = 2, D = 3;

std::map<oracle::WindowKey, std::uint64_t> tree_edges(const ContextTree& tree) {
  std::map<oracle::WindowKey, std::uint64_t> edges;
  tree.visit_edges([&](std::span<const LocationId> context, LocationId next,
                       std::uint64_t count) {
    edges[{std::vector<LocationId>(context.begin(), context.end()), next}] = count;
  });
  return edges;
}

std::vector<Trajectory> trajectories_for(
    const std::vector<std::pair<ObjectId, std::vector<LocationId>>>& data) {
  std::vector<Trajectory> out;
  for (const auto& [object, seq] : data) {
    Trajectory t{object, {}};
    Timestamp time = 0;
    for (LocationId l : seq) t.units.push_back({l, time++});
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_CASE("context tree counts windows of every order") {
  ContextTree tree(2);
  tree.add_sequence(std::vector<LocationId>{A, B, C});
  auto edges = tree_edges(tree);
  CHECK(edges.size() == 3);
  CHECK(edges[{{A}, B}] == 1);
  CHECK(edges[{{B}, C}] == 1);
  CHECK(edges[{{A, B}, C}] == 1);
}

TEST_CASE("context tree ignores single-unit sequences and adds counts") {
  ContextTree tree(3);
  tree.add_sequence(std::vector<LocationId>{A});
  CHECK(tree.empty());
  CHECK(tree.edge_count() == 0);

  ContextTree tree2(1);
  tree2.add_sequence(std::vector<LocationId>{A, B});
  tree2.add_sequence(std::vector<LocationId>{A, B});
  auto edges = tree_edges(tree2);
  CHECK(edges.size() == 1);
  CHECK(edges[{{A}, B}] == 2);
}

TEST_CASE("context tree counts equal the brute-force window oracle") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    Rng rng(seed);
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.bounded(7));
    const int order = 1 + static_cast<int>(rng.bounded(3));
    auto sequences = oracle::random_sequences(seed ^ 0xfeed, m, 50, 6);

    ContextTree tree(order);
    for (const auto& seq : sequences) tree.add_sequence(seq);

    auto expected = oracle::count_windows(sequences, order);
    CHECK(tree_edges(tree) == expected);
  }
}

TEST_CASE("gmm prediction uses the longest matching suffix") {
  GlobalMarkovModel model =
      GlobalMarkovModel::train({{A, B, C}, {A, B, D}}, 4, 2);

  SUBCASE("exact order-2 context") {
    auto v = model.predict(std::vector<LocationId>{A, B});
    CHECK(v[C] == doctest::Approx(0.5));
    CHECK(v[D] == doctest::Approx(0.5));
    CHECK(v[A] == 0.0);
  }
  SUBCASE("unknown prefix falls back to the order-1 suffix") {
    LocationId Z = 3;
    auto v = model.predict(std::vector<LocationId>{Z, B});
    CHECK(v[C] == doctest::Approx(0.5));
    CHECK(v[D] == doctest::Approx(0.5));
  }
  SUBCASE("unseen location yields the zero vector") {
    auto v = model.predict(std::vector<LocationId>{D});
    CHECK(is_zero_vector(v));
  }
}

TEST_CASE("gmm longest-match dominance and fallback cascade") {
  // deterministic at order 3, contradicting at order 1
  GlobalMarkovModel model =
      GlobalMarkovModel::train({{A, B, C, D}, {C, D}, {B, C, A}}, 4, 3);
  std::vector<LocationId> context{A, B, C};

  auto match = model.tree().longest_match(context);
  REQUIRE(match.node != nullptr);
  CHECK(match.depth == 3);
  auto direct = model.tree().find(context);
  CHECK(match.node == direct);
  CHECK(model.predict(context)[D] == doctest::Approx(1.0));

  // removing the deepest node exposes the order-2 distribution
  REQUIRE(model.tree().remove_context(context));
  auto match2 = model.tree().longest_match(context);
  CHECK(match2.depth == 2);
  auto v2 = model.predict(context);
  CHECK(v2[A] == doctest::Approx(0.5));
  CHECK(v2[D] == doctest::Approx(0.5));

  REQUIRE(model.tree().remove_context(std::vector<LocationId>{B, C}));
  auto v1 = model.predict(context);
  CHECK(v1[D] == doctest::Approx(2.0 / 3.0));
  CHECK(v1[A] == doctest::Approx(1.0 / 3.0));

  REQUIRE(model.tree().remove_context(std::vector<LocationId>{C}));
  CHECK(is_zero_vector(model.predict(context)));
}

TEST_CASE("non-zero predictions are distributions over observed successors") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::uint32_t m = 6;
    auto sequences = oracle::random_sequences(seed, m, 30, 6);
    GlobalMarkovModel model = GlobalMarkovModel::train(sequences, m, 3);
    auto expected = oracle::count_windows(sequences, 3);

    Rng rng(seed ^ 0xabc);
    for (int probe = 0; probe < 20; ++probe) {
      std::vector<LocationId> context(1 + rng.bounded(4));
      for (auto& l : context) l = static_cast<LocationId>(rng.bounded(m));
      auto v = model.predict(context);
      if (is_zero_vector(v)) continue;
      double sum = 0.0;
      for (double x : v) sum += x;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

      auto match = model.tree().longest_match(context);
      REQUIRE(match.node != nullptr);
      std::vector<LocationId> suffix(context.end() - match.depth, context.end());
      for (std::uint32_t l = 0; l < m; ++l) {
        if (v[l] > 0.0) {
          CHECK(expected.count({suffix, l}) == 1);
        }
      }
    }
  }
}

TEST_CASE("zero-order distribution follows unit frequencies") {
  auto v = zero_order_distribution(std::vector<LocationId>{A, A, B, C}, 4);
  CHECK(v[A] == doctest::Approx(0.5));
  CHECK(v[B] == doctest::Approx(0.25));
  CHECK(v[C] == doctest::Approx(0.25));

  auto single = zero_order_distribution(std::vector<LocationId>{A}, 2);
  CHECK(single[A] == doctest::Approx(1.0));

  CHECK(is_zero_vector(zero_order_distribution({}, 3)));
}

TEST_CASE("pmm separates per-object trees and zero-order vectors") {
  SUBCASE("singleton trajectories feed only the zero-order model") {
    auto model = PersonalMarkovModel::train(
        trajectories_for({{7, {A}}, {7, {B}}}), 3, 2);
    const auto& om = model.objects().at(7);
    CHECK(om.tree.empty());
    auto v = model.zero_order(7);
    CHECK(v[A] == doctest::Approx(0.5));
    CHECK(v[B] == doctest::Approx(0.5));
  }
  SUBCASE("window counts per object") {
    auto model = PersonalMarkovModel::train(
        trajectories_for({{7, {A, B, A, B}}}), 3, 1);
    auto edges = tree_edges(model.objects().at(7).tree);
    CHECK(edges[{{A}, B}] == 2);
    CHECK(edges[{{B}, A}] == 1);
    auto zero = model.zero_order(7);
    CHECK(zero[A] == doctest::Approx(0.5));
    CHECK(zero[B] == doctest::Approx(0.5));
  }
}

TEST_CASE("pmm prediction backs off to the zero-order vector") {
  auto model = PersonalMarkovModel::train(
      trajectories_for({{3, {A, B}}, {3, {A, B}}}), 4, 2);

  // context ends at A: the personal tree answers
  auto v = model.predict(3, std::vector<LocationId>{D, A});
  CHECK(v[B] == doctest::Approx(1.0));

  // context ends at an unseen location: zero-order backoff
  auto backoff = model.predict(3, std::vector<LocationId>{C});
  CHECK(backoff[A] == doctest::Approx(0.5));
  CHECK(backoff[B] == doctest::Approx(0.5));

  // unknown object: zero vector
  CHECK(is_zero_vector(model.predict(99, std::vector<LocationId>{A})));
}

TEST_CASE("pmm counts match the oracle per object") {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    Rng rng(seed);
    std::vector<std::pair<ObjectId, std::vector<LocationId>>> data;
    std::vector<std::vector<std::vector<LocationId>>> per_object(3);
    for (int i = 0; i < 20; ++i) {
      auto seqs = oracle::random_sequences(mix_seed(seed, i), 5, 1, 5);
      ObjectId object = static_cast<ObjectId>(rng.bounded(3));
      data.push_back({object, seqs[0]});
      per_object[object].push_back(seqs[0]);
    }
    auto model = PersonalMarkovModel::train(trajectories_for(data), 5, 3);
    for (ObjectId o = 0; o < 3; ++o) {
      if (per_object[o].empty()) continue;
      // singletons contribute no windows; the oracle skips them naturally
      auto expected = oracle::count_windows(per_object[o], 3);
      CHECK(tree_edges(model.objects().at(o).tree) == expected);
    }
  }
}
