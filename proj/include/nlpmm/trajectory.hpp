#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "nlpmm/records.hpp"
#include "nlpmm/types.hpp"

namespace nlpmm {

// Per location, the set of locations observed (or declared) as an immediate
// successor. Entries are sorted and unique.
struct CandidateMap {
  std::vector<std::vector<LocationId>> successors;

  std::size_t location_count() const { return successors.size(); }
};

struct DatasetStats {
  std::size_t trajectory_count = 0;
  std::size_t record_count = 0;
  std::map<std::size_t, std::size_t> length_histogram;
  std::vector<std::size_t> candidate_counts;  // per location
  double singleton_fraction = 0.0;
  double mean_candidate_count = 0.0;  // over locations with >= 1 candidate
};

// Parsed dataset: the location/object universes plus sessionized trajectories.
struct TrajectoryStore {
  Interner locations;
  Interner objects;
  std::vector<Trajectory> trajectories;

  std::uint32_t location_count() const {
    return static_cast<std::uint32_t>(locations.size());
  }
};

// Groups records by object, sorts by time, drops duplicate (object, time)
// pairs keeping the first, and starts a new trajectory whenever the gap
// between consecutive records exceeds gap_seconds. Output is ordered by
// object id, then start time. gap_seconds must be positive.
std::vector<Trajectory> sessionize(const std::vector<PassageRecord>& records,
                                   std::int64_t gap_seconds);

std::vector<LocationId> location_sequence(const Trajectory& trajectory);

CandidateMap induce_candidates(const std::vector<Trajectory>& trajectories,
                               std::uint32_t location_count);

DatasetStats dataset_stats(const std::vector<Trajectory>& trajectories,
                           const CandidateMap& candidates);

TrajectoryStore make_store(ParsedRecords parsed, std::int64_t gap_seconds);

}  // namespace nlpmm
