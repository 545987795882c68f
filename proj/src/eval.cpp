#include "nlpmm/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "nlpmm/util.hpp"

namespace nlpmm {

std::vector<EvalExample> make_examples(const std::vector<Trajectory>& test_set) {
  std::vector<EvalExample> examples;
  for (const Trajectory& t : test_set) {
    for (std::size_t i = 1; i < t.units.size(); ++i) {
      EvalExample ex;
      ex.object = t.object;
      ex.context.assign(t.units.begin(), t.units.begin() + i);
      ex.truth = t.units[i].location;
      ex.query_time = t.units[i - 1].time;
      examples.push_back(std::move(ex));
    }
  }
  return examples;
}

double prediction_coverage(std::span<const ExampleResult> results) {
  if (results.empty()) return 0.0;
  std::size_t covered = 0;
  for (const ExampleResult& r : results) covered += r.covered ? 1 : 0;
  return static_cast<double>(covered) / results.size();
}

double accuracy_at_k(std::span<const ExampleResult> results, std::size_t k) {
  if (results.empty()) return 0.0;
  std::size_t hits = 0;
  for (const ExampleResult& r : results) {
    if (r.informative && r.truth_rank >= 1 && r.truth_rank <= k) ++hits;
  }
  return static_cast<double>(hits) / results.size();
}

double one_error(std::span<const ExampleResult> results) {
  if (results.empty()) return 0.0;
  return 1.0 - accuracy_at_k(results, 1);
}

double average_precision(std::span<const ExampleResult> results, std::size_t k) {
  if (results.empty()) return 0.0;
  // accumulate integer counts per rank so the result is exactly invariant
  // under permutation of the examples
  std::vector<std::size_t> rank_counts(k + 1, 0);
  for (const ExampleResult& r : results) {
    if (r.informative && r.truth_rank >= 1 && r.truth_rank <= k) {
      ++rank_counts[r.truth_rank];
    }
  }
  double total = 0.0;
  for (std::size_t rank = 1; rank <= k; ++rank) {
    total += static_cast<double>(rank_counts[rank]) / static_cast<double>(rank);
  }
  return total / results.size();
}

ExampleResult evaluate_example(const Model& model, const EvalExample& example,
                               std::size_t k) {
  const Prediction prediction = predict(model, example.object, example.context, k);
  ExampleResult result;
  result.covered = prediction.covered;
  result.informative = prediction.informative;
  for (std::size_t i = 0; i < prediction.ranked.size(); ++i) {
    if (prediction.ranked[i] == example.truth) {
      result.truth_rank = i + 1;
      break;
    }
  }
  return result;
}

void split_trajectories(const std::vector<Trajectory>& trajectories,
                        double fraction, std::uint64_t seed,
                        std::vector<Trajectory>& train,
                        std::vector<Trajectory>& test) {
  if (fraction <= 0.0 || fraction >= 1.0) {
    throw std::invalid_argument("split fraction must be in (0, 1)");
  }
  train.clear();
  test.clear();

  ObjectId max_object = 0;
  for (const Trajectory& t : trajectories) max_object = std::max(max_object, t.object);
  std::vector<std::vector<const Trajectory*>> by_object(
      trajectories.empty() ? 0 : max_object + 1);
  for (const Trajectory& t : trajectories) by_object[t.object].push_back(&t);

  for (ObjectId o = 0; o < by_object.size(); ++o) {
    auto& group = by_object[o];
    if (group.empty()) continue;
    Rng rng(mix_seed(seed, o));
    // Fisher-Yates over the object's trajectories
    for (std::size_t i = group.size(); i > 1; --i) {
      std::swap(group[i - 1], group[rng.bounded(i)]);
    }
    const double exact = fraction * static_cast<double>(group.size());
    std::size_t take = static_cast<std::size_t>(exact);
    if (rng.unit() < exact - static_cast<double>(take)) ++take;  // fractional part
    take = std::min(take, group.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
      (i < take ? train : test).push_back(*group[i]);
    }
  }
}

EvalReport run_experiment(const std::vector<Trajectory>& trajectories,
                          std::uint32_t location_count,
                          const ExperimentConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (config.top_k < 1) throw std::invalid_argument("k must be >= 1");

  EvalReport report;
  report.config = config;
  report.mean.accuracy.assign(config.top_k, 0.0);
  report.mean.one_error = 0.0;

  for (int run = 0; run < config.runs; ++run) {
    std::vector<Trajectory> train, test;
    split_trajectories(trajectories, config.split_fraction,
                       mix_seed(config.seed, static_cast<std::uint64_t>(run)), train,
                       test);
    if (train.empty() || test.empty()) {
      throw std::invalid_argument("split produced an empty train or test set");
    }
    TrainConfig train_config = config.train;
    train_config.seed = mix_seed(config.seed, static_cast<std::uint64_t>(run), 1);
    const Model model = train_model(train, location_count, train_config);

    const std::vector<EvalExample> examples = make_examples(test);
    std::vector<ExampleResult> results;
    results.reserve(examples.size());
    for (const EvalExample& ex : examples) {
      results.push_back(evaluate_example(model, ex, config.top_k));
    }

    RunMetrics metrics;
    metrics.example_count = results.size();
    metrics.coverage = prediction_coverage(results);
    metrics.accuracy.reserve(config.top_k);
    for (std::size_t k = 1; k <= config.top_k; ++k) {
      metrics.accuracy.push_back(accuracy_at_k(results, k));
    }
    metrics.one_error = one_error(results);
    metrics.average_precision = average_precision(results, config.top_k);
    report.runs.push_back(std::move(metrics));
  }

  RunMetrics& mean = report.mean;
  for (const RunMetrics& m : report.runs) {
    mean.coverage += m.coverage;
    for (std::size_t i = 0; i < mean.accuracy.size(); ++i) {
      mean.accuracy[i] += m.accuracy[i];
    }
    mean.one_error += m.one_error;
    mean.average_precision += m.average_precision;
    mean.example_count += m.example_count;
  }
  const double n = static_cast<double>(report.runs.size());
  mean.coverage /= n;
  for (double& a : mean.accuracy) a /= n;
  mean.one_error /= n;
  mean.average_precision /= n;
  return report;
}

namespace {

void write_metric_rows(std::ostream& out, const std::string& run_label,
                       const std::string& variant, const RunMetrics& metrics,
                       std::size_t top_k) {
  auto row = [&](const std::string& metric, std::size_t k, double value) {
    out << run_label << '\t' << variant << '\t' << metric << '\t' << k << '\t'
        << format_double(value) << '\n';
  };
  row("coverage", 0, metrics.coverage);
  for (std::size_t k = 1; k <= top_k; ++k) {
    row("accuracy", k, metrics.accuracy[k - 1]);
  }
  row("one_error", 1, metrics.one_error);
  row("average_precision", top_k, metrics.average_precision);
  row("examples", 0, static_cast<double>(metrics.example_count));
}

}  // namespace

void write_report(std::ostream& out, const EvalReport& report) {
  const ExperimentConfig& cfg = report.config;
  const std::string variant = to_string(cfg.train.variant);
  out << "# nlpmm-report v1\n";
  out << "# config variant=" << variant << " order=" << cfg.train.order
      << " bins=" << cfg.train.bin_count << " clusters=" << cfg.train.cluster_count
      << " topk=" << cfg.top_k << " split=" << format_double(cfg.split_fraction)
      << " runs=" << cfg.runs << " seed=" << cfg.seed << " gap=" << cfg.gap_seconds
      << " span=" << cfg.train.span_seconds
      << " offset=" << cfg.train.utc_offset_seconds
      << " blend_holdout=" << format_double(cfg.train.blend_holdout) << "\n";
  out << "# columns run\tvariant\tmetric\tk\tvalue\n";
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    write_metric_rows(out, std::to_string(r), variant, report.runs[r], cfg.top_k);
  }
  write_metric_rows(out, "mean", variant, report.mean, cfg.top_k);

  char line[160];
  std::snprintf(line, sizeof(line),
                "# summary %s runs=%zu coverage=%.4f accuracy@%zu=%.4f "
                "one_error=%.4f average_precision=%.4f\n",
                variant.c_str(), report.runs.size(), report.mean.coverage,
                cfg.top_k, report.mean.accuracy.back(), report.mean.one_error,
                report.mean.average_precision);
  out << line;
}

}  // namespace nlpmm
