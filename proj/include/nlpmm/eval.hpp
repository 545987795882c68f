#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nlpmm/predictor.hpp"
#include "nlpmm/trajectory.hpp"

namespace nlpmm {

struct EvalExample {
  ObjectId object = 0;
  std::vector<TrajectoryUnit> context;  // length >= 1
  LocationId truth = 0;
  Timestamp query_time = 0;  // time of the last context unit
};

// Every trajectory of length L >= 2 yields L-1 examples: context = units
// 1..i, truth = unit i+1's location.
std::vector<EvalExample> make_examples(const std::vector<Trajectory>& test_set);

// Outcome of one prediction, reduced to what the metrics need.
struct ExampleResult {
  bool covered = false;      // raw (pre-fallback) output carried information
  bool informative = false;  // output after fallback carried information
  std::size_t truth_rank = 0;  // 1-based rank of the truth, 0 if absent
};

double prediction_coverage(std::span<const ExampleResult> results);
// Unpredicted examples count as misses; hits require an informative result.
double accuracy_at_k(std::span<const ExampleResult> results, std::size_t k);
double one_error(std::span<const ExampleResult> results);
double average_precision(std::span<const ExampleResult> results, std::size_t k);

ExampleResult evaluate_example(const Model& model, const EvalExample& example,
                               std::size_t k);

struct ExperimentConfig {
  TrainConfig train;
  std::size_t top_k = 1;
  double split_fraction = 0.7;  // of each object's trajectories into training
  int runs = 50;
  std::uint64_t seed = 0;
  std::int64_t gap_seconds = 1800;  // echoed for provenance
};

struct RunMetrics {
  double coverage = 0.0;
  std::vector<double> accuracy;  // accuracy@k for k = 1..top_k
  double one_error = 1.0;
  double average_precision = 0.0;
  std::size_t example_count = 0;
};

struct EvalReport {
  ExperimentConfig config;
  std::vector<RunMetrics> runs;
  RunMetrics mean;
};

// Object-stratified split: each object's trajectories are shuffled and split
// by the fraction. Deterministic given (seed, run index).
void split_trajectories(const std::vector<Trajectory>& trajectories,
                        double fraction, std::uint64_t seed,
                        std::vector<Trajectory>& train,
                        std::vector<Trajectory>& test);

// Trains and evaluates `runs` independent shuffled splits and averages the
// metrics. Throws when a split leaves train or test empty.
EvalReport run_experiment(const std::vector<Trajectory>& trajectories,
                          std::uint32_t location_count,
                          const ExperimentConfig& config);

void write_report(std::ostream& out, const EvalReport& report);

}  // namespace nlpmm
