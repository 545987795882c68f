#include "nlpmm/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlpmm {

std::vector<Trajectory> sessionize(const std::vector<PassageRecord>& records,
                                   std::int64_t gap_seconds) {
  if (gap_seconds <= 0) throw std::invalid_argument("gap must be positive");

  ObjectId max_object = 0;
  for (const PassageRecord& r : records) max_object = std::max(max_object, r.object);
  std::vector<std::vector<TrajectoryUnit>> by_object(records.empty() ? 0 : max_object + 1);
  for (const PassageRecord& r : records) {
    by_object[r.object].push_back({r.location, r.time});
  }

  std::vector<Trajectory> out;
  for (ObjectId object = 0; object < by_object.size(); ++object) {
    auto& units = by_object[object];
    if (units.empty()) continue;
    // stable sort keeps input order among equal timestamps, so the dedup
    // below keeps the first record
    std::stable_sort(units.begin(), units.end(),
                     [](const TrajectoryUnit& a, const TrajectoryUnit& b) {
                       return a.time < b.time;
                     });
    Trajectory current{object, {}};
    for (const TrajectoryUnit& u : units) {
      if (!current.units.empty()) {
        if (u.time == current.units.back().time) continue;  // duplicate (object, time)
        if (u.time - current.units.back().time > gap_seconds) {
          out.push_back(std::move(current));
          current = Trajectory{object, {}};
        }
      }
      current.units.push_back(u);
    }
    if (!current.units.empty()) out.push_back(std::move(current));
  }
  return out;
}

std::vector<LocationId> location_sequence(const Trajectory& trajectory) {
  std::vector<LocationId> seq;
  seq.reserve(trajectory.units.size());
  for (const TrajectoryUnit& u : trajectory.units) seq.push_back(u.location);
  return seq;
}

CandidateMap induce_candidates(const std::vector<Trajectory>& trajectories,
                               std::uint32_t location_count) {
  CandidateMap map;
  map.successors.assign(location_count, {});
  for (const Trajectory& t : trajectories) {
    for (std::size_t i = 0; i + 1 < t.units.size(); ++i) {
      map.successors[t.units[i].location].push_back(t.units[i + 1].location);
    }
  }
  for (auto& set : map.successors) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return map;
}

DatasetStats dataset_stats(const std::vector<Trajectory>& trajectories,
                           const CandidateMap& candidates) {
  DatasetStats stats;
  stats.trajectory_count = trajectories.size();
  std::size_t singletons = 0;
  for (const Trajectory& t : trajectories) {
    stats.record_count += t.units.size();
    ++stats.length_histogram[t.units.size()];
    if (t.units.size() == 1) ++singletons;
  }
  stats.singleton_fraction =
      trajectories.empty() ? 0.0
                           : static_cast<double>(singletons) / trajectories.size();

  stats.candidate_counts.reserve(candidates.successors.size());
  std::size_t with_candidates = 0;
  std::size_t total_candidates = 0;
  for (const auto& set : candidates.successors) {
    stats.candidate_counts.push_back(set.size());
    if (!set.empty()) {
      ++with_candidates;
      total_candidates += set.size();
    }
  }
  stats.mean_candidate_count =
      with_candidates == 0 ? 0.0
                           : static_cast<double>(total_candidates) / with_candidates;
  return stats;
}

TrajectoryStore make_store(ParsedRecords parsed, std::int64_t gap_seconds) {
  TrajectoryStore store;
  store.trajectories = sessionize(parsed.records, gap_seconds);
  store.locations = std::move(parsed.locations);
  store.objects = std::move(parsed.objects);
  return store;
}

}  // namespace nlpmm
