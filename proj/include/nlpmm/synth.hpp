#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nlpmm/trajectory.hpp"
#include "nlpmm/types.hpp"

namespace nlpmm {

// Sparse distribution over next locations: (next, probability) pairs.
using TransitionRow = std::vector<std::pair<LocationId, double>>;
// One row per location.
using TransitionTable = std::vector<TransitionRow>;

// One movement regime active during [start_second, end_second) of the cycle.
// An empty table is filled with random weights over the planted graph.
struct RegimeSpec {
  std::int64_t start_second = 0;
  std::int64_t end_second = 86400;
  TransitionTable table;
};

struct SynthConfig {
  std::uint32_t location_count = 20;
  int out_degree = 5;
  std::uint32_t object_count = 100;
  int trajectories_per_object = 10;
  double singleton_fraction = 0.73;
  double length_tail = 0.5;  // continuation probability for lengths >= 2
  int max_length = 8;
  std::vector<RegimeSpec> regimes;  // must cover [0, span) contiguously;
                                    // empty means one random regime over the cycle
  double personal_bias = 0.0;       // probability of following the object's
                                    // preferred successor instead of the regime
  std::int64_t span_seconds = 86400;
  std::int64_t unit_gap_seconds = 60;
  // Dead zone before the end of the cycle so consecutive days never fall
  // within one sessionization gap of each other.
  std::int64_t day_end_guard_seconds = 3600;
  std::uint64_t seed = 1;
};

struct GroundTruth {
  std::vector<RegimeSpec> regimes;  // tables filled in
  // preferred successor per (object, location)
  std::vector<std::vector<LocationId>> personal_preference;
  double personal_bias = 0.0;
};

struct SynthOutput {
  std::vector<Trajectory> trajectories;
  GroundTruth truth;
  Interner objects;    // "O0".."O<n-1>"
  Interner locations;  // "L0".."L<m-1>"
};

// Deterministic random walks over the planted regime tables, mixed with each
// object's personal preference by personal_bias. Trajectory i of an object
// lives on day i, inside the window of one regime. Throws
// std::invalid_argument on an inconsistent config.
SynthOutput generate(const SynthConfig& config);

// Writes records in the ingestion text format (object,location,ISO-8601),
// grouped by object in time order.
void write_records(std::ostream& out, const SynthOutput& output);

// Structured-text dump of the planted tables.
void write_ground_truth(std::ostream& out, const GroundTruth& truth);

}  // namespace nlpmm
