#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "nlpmm/predictor.hpp"
#include "nlpmm/temporal.hpp"
#include "nlpmm/util.hpp"

using namespace nlpmm;

namespace {

constexpr std::int64_t kHour = 3600;

Trajectory at_hours(ObjectId object, const std::vector<std::pair<LocationId, double>>& units) {
  Trajectory t{object, {}};
  for (const auto& [location, hour] : units) {
    t.units.push_back({location, static_cast<Timestamp>(hour * kHour)});
  }
  return t;
}

}  // namespace

TEST_CASE("assign_bins splits runs at bin boundaries") {
  TimeBinConfig config{86400, 24, 0};
  auto binned = assign_bins({at_hours(0, {{1, 8.1}, {2, 8.5}, {3, 9.2}})}, config);
  REQUIRE(binned.size() == 2);
  CHECK(binned[0].bin == 8);
  CHECK(binned[0].trajectory.units.size() == 2);
  CHECK(binned[1].bin == 9);
  CHECK(binned[1].trajectory.units.size() == 1);
}

TEST_CASE("assign_bins with a single bin is the identity") {
  TimeBinConfig config{86400, 1, 0};
  auto trajectories = std::vector<Trajectory>{
      at_hours(0, {{1, 2.0}, {2, 13.0}, {3, 23.9}})};
  auto binned = assign_bins(trajectories, config);
  REQUIRE(binned.size() == 1);
  CHECK(binned[0].bin == 0);
  CHECK(binned[0].trajectory == trajectories[0]);
}

TEST_CASE("bin boundaries are half-open") {
  TimeBinConfig config{86400, 24, 0};
  CHECK(bin_of(9 * kHour, config) == 9);
  CHECK(bin_of(9 * kHour - 1, config) == 8);
  CHECK(bin_of(0, config) == 0);
  CHECK(bin_of(86399, config) == 23);
  // next day wraps around
  CHECK(bin_of(86400 + 5, config) == 0);
}

TEST_CASE("offset shifts timestamps into local time") {
  TimeBinConfig config{86400, 24, 8 * kHour};
  CHECK(bin_of(0, config) == 8);
  CHECK(bin_of(20 * kHour, config) == 4);  // 20:00 UTC = 04:00 local
  TimeBinConfig negative{86400, 24, -kHour};
  CHECK(bin_of(0, negative) == 23);
}

TEST_CASE("bin config validation") {
  CHECK_THROWS_AS((TimeBinConfig{86400, 0, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((TimeBinConfig{86400, 7, 0}).validate(), std::invalid_argument);
  CHECK_NOTHROW((TimeBinConfig{86400, 24, 0}).validate());
}

TEST_CASE("bin assignment is a partition of the unit multiset") {
  Rng rng(77);
  TimeBinConfig config{86400, 12, 0};
  for (int round = 0; round < 20; ++round) {
    std::vector<Trajectory> trajectories;
    for (int t = 0; t < 10; ++t) {
      Trajectory trajectory{static_cast<ObjectId>(t % 3), {}};
      Timestamp time = rng.bounded(86400);
      const std::size_t length = 1 + rng.bounded(6);
      for (std::size_t u = 0; u < length; ++u) {
        trajectory.units.push_back({static_cast<LocationId>(rng.bounded(5)), time});
        time += 1 + rng.bounded(7200);
      }
      trajectories.push_back(std::move(trajectory));
    }
    auto binned = assign_bins(trajectories, config);

    std::multiset<std::pair<ObjectId, Timestamp>> input, output;
    for (const auto& t : trajectories) {
      for (const auto& u : t.units) input.insert({t.object, u.time});
    }
    for (const auto& bt : binned) {
      REQUIRE(!bt.trajectory.units.empty());
      for (const auto& u : bt.trajectory.units) {
        CHECK(bin_of(u.time, config) == bt.bin);
        output.insert({bt.trajectory.object, u.time});
      }
    }
    CHECK(input == output);
  }
}

TEST_CASE("transition distributions normalize per (location, bin) cell") {
  std::vector<Trajectory> trajectories;
  // bin 8: A->B three times, A->C once
  for (int i = 0; i < 3; ++i) {
    trajectories.push_back(at_hours(0, {{0, 8.1 + 0.01 * i}, {1, 8.2 + 0.01 * i}}));
  }
  trajectories.push_back(at_hours(1, {{0, 8.4}, {2, 8.6}}));
  auto binned = assign_bins(trajectories, TimeBinConfig{86400, 24, 0});
  auto dists = transition_distributions(binned, 3, 24);

  const auto& cell = dists[0 * 24 + 8];
  CHECK(cell.location == 0);
  CHECK(cell.bin == 8);
  CHECK(cell.vector[1] == doctest::Approx(0.75));
  CHECK(cell.vector[2] == doctest::Approx(0.25));

  // empty cell stays zero; a single pair is one-hot
  CHECK(is_zero_vector(dists[0 * 24 + 9].vector));
  trajectories.push_back(at_hours(2, {{2, 9.5}, {0, 9.6}}));
  auto dists2 = transition_distributions(
      assign_bins(trajectories, TimeBinConfig{86400, 24, 0}), 3, 24);
  CHECK(dists2[2 * 24 + 9].vector[0] == doctest::Approx(1.0));
}

TEST_CASE("cosine similarity") {
  ProbabilityVector p{0.5, 0.5, 0.0};
  CHECK(cosine_similarity(p, p) == doctest::Approx(1.0));
  CHECK(cosine_similarity({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}) == doctest::Approx(0.0));
  CHECK(cosine_similarity(p, {1.0, 0.0, 0.0}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(cosine_similarity({0.0, 0.0, 0.0}, p) == 0.0);
}

TEST_CASE("cosine similarity stays in [0,1] and is symmetric") {
  Rng rng(13);
  for (int round = 0; round < 100; ++round) {
    ProbabilityVector p(4), q(4);
    for (std::size_t i = 0; i < 4; ++i) {
      p[i] = rng.bounded(3) * 0.5 * rng.unit();
      q[i] = rng.bounded(3) * 0.5 * rng.unit();
    }
    const double pq = cosine_similarity(p, q);
    CHECK(pq >= 0.0);
    CHECK(pq <= 1.0 + 1e-12);
    CHECK(pq == doctest::Approx(cosine_similarity(q, p)));
  }
}

namespace {

std::vector<ProbabilityVector> two_group_distributions(int group_a, int group_b) {
  // group A points at location 0, group B at location 1: orthogonal
  std::vector<ProbabilityVector> dists;
  for (int i = 0; i < group_a; ++i) dists.push_back({1.0, 0.0, 0.0});
  for (int i = 0; i < group_b; ++i) dists.push_back({0.0, 1.0, 0.0});
  return dists;
}

}  // namespace

TEST_CASE("cluster_bins handles the degenerate cluster counts") {
  auto dists = two_group_distributions(3, 3);
  SUBCASE("one cluster holds everything") {
    auto assignment = cluster_bins(dists, 1, 100, 5);
    for (int c : assignment) CHECK(c == 0);
  }
  SUBCASE("as many clusters as bins separates distinct directions") {
    std::vector<ProbabilityVector> distinct{
        {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    auto assignment = cluster_bins(distinct, 3, 100, 17);
    std::set<int> used(assignment.begin(), assignment.end());
    CHECK(used.size() == 3);
  }
  SUBCASE("cluster count out of range") {
    CHECK_THROWS_AS(cluster_bins(dists, 7, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(cluster_bins(dists, 0, 100, 1), std::invalid_argument);
  }
}

TEST_CASE("orthogonal groups are recovered exactly for every seeding") {
  auto dists = two_group_distributions(4, 3);
  const std::size_t n = dists.size();

  auto check_recovery = [&](const std::vector<int>& assignment) {
    for (std::size_t i = 0; i < 4; ++i) CHECK(assignment[i] == assignment[0]);
    for (std::size_t i = 4; i < n; ++i) CHECK(assignment[i] == assignment[4]);
    CHECK(assignment[0] != assignment[4]);
  };

  SUBCASE("exhaustive over ordered initial centre pairs") {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const std::size_t initial[] = {a, b};
        check_recovery(cluster_bins_from_initial(dists, initial, 100));
      }
    }
  }
  SUBCASE("seeded front door") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      check_recovery(cluster_bins(dists, 2, 100, seed));
    }
  }
}

TEST_CASE("empty bins join cluster 0 and seeding prefers informative bins") {
  std::vector<ProbabilityVector> dists = two_group_distributions(2, 2);
  dists.push_back({0.0, 0.0, 0.0});
  dists.push_back({0.0, 0.0, 0.0});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto assignment = cluster_bins(dists, 2, 100, seed);
    CHECK(assignment[0] == assignment[1]);
    CHECK(assignment[2] == assignment[3]);
    CHECK(assignment[0] != assignment[2]);
    CHECK(assignment[4] == 0);
    CHECK(assignment[5] == 0);
  }
}

TEST_CASE("clustering respects the iteration cap") {
  auto dists = two_group_distributions(4, 4);
  // a single assignment pass happens even with the cap at 1
  auto assignment = cluster_bins_from_initial(dists, std::vector<std::size_t>{0, 4}, 1);
  CHECK(assignment[0] == 0);
  CHECK(assignment[4] == 1);
}
