// Command-line front door: ingest raw passage records, train and inspect
// models, predict next locations, run evaluation experiments, and generate
// synthetic datasets. Exit codes: 0 success, 1 domain error, 2 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nlpmm/eval.hpp"
#include "nlpmm/model_io.hpp"
#include "nlpmm/predictor.hpp"
#include "nlpmm/records.hpp"
#include "nlpmm/store_io.hpp"
#include "nlpmm/synth.hpp"
#include "nlpmm/trajectory.hpp"
#include "nlpmm/util.hpp"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

struct CliOptions {
  std::string input;
  std::string output;
  std::string variant = "nlpmm";
  int order = 3;
  int bins = 24;
  int clusters = 5;
  int topk = 1;
  std::int64_t gap = 1800;
  double split = 0.7;
  int runs = 50;
  std::uint64_t seed = 0;
  std::int64_t span = 86400;
  std::int64_t offset = 0;
  double blend_holdout = 0.0;
  char delimiter = ',';
  bool header = false;

  // predict
  std::string object;
  std::string context;
  std::string time;

  // synth
  std::uint32_t synth_locations = 20;
  std::uint32_t synth_objects = 200;
  int synth_per_object = 10;
  double synth_singleton = 0.73;
  int synth_degree = 5;
  double synth_bias = 0.0;
  int synth_regimes = 1;
  std::string truth_output;
};

nlpmm::TrainConfig train_config(const CliOptions& options) {
  nlpmm::TrainConfig config;
  config.variant = nlpmm::variant_from_string(options.variant);
  config.order = options.order;
  config.bin_count = options.bins;
  config.cluster_count = options.clusters;
  config.span_seconds = options.span;
  config.utc_offset_seconds = options.offset;
  config.seed = options.seed;
  config.blend_holdout = options.blend_holdout;
  return config;
}

std::string config_echo(const CliOptions& options, const std::string& command) {
  std::ostringstream out;
  out << "config command=" << command << " input=" << options.input
      << " output=" << options.output << " variant=" << options.variant
      << " order=" << options.order << " bins=" << options.bins
      << " clusters=" << options.clusters << " topk=" << options.topk
      << " gap=" << options.gap << " split=" << options.split
      << " runs=" << options.runs << " seed=" << options.seed;
  return out.str();
}

int cmd_ingest(const CliOptions& options) {
  std::ifstream in(options.input);
  if (!in) throw nlpmm::IoError("cannot open " + options.input);
  nlpmm::ParseOptions parse_options;
  parse_options.delimiter = options.delimiter;
  parse_options.has_header = options.header;
  nlpmm::ParsedRecords parsed = nlpmm::parse_records(in, parse_options);
  const std::size_t record_count = parsed.records.size();

  nlpmm::TrajectoryStore store = nlpmm::make_store(std::move(parsed), options.gap);
  nlpmm::save_store_file(options.output, store);

  const nlpmm::CandidateMap candidates =
      nlpmm::induce_candidates(store.trajectories, store.location_count());
  const nlpmm::DatasetStats stats = nlpmm::dataset_stats(store.trajectories, candidates);
  std::printf("%s\n", config_echo(options, "ingest").c_str());
  std::printf(
      "records=%zu trajectories=%zu objects=%zu locations=%zu "
      "singletons=%.2f mean_candidates=%.2f\n",
      record_count, stats.trajectory_count, store.objects.size(),
      store.locations.size(), stats.singleton_fraction, stats.mean_candidate_count);
  return 0;
}

int cmd_train(const CliOptions& options) {
  const nlpmm::TrajectoryStore store = nlpmm::load_store_file(options.input);
  const nlpmm::Model model = nlpmm::train_model(store, train_config(options));
  nlpmm::save_model_file(options.output, model);

  std::printf("%s\n", config_echo(options, "train").c_str());
  std::printf("beta %s %s %s\n", nlpmm::format_double(model.base.blend.intercept).c_str(),
              nlpmm::format_double(model.base.blend.global_weight).c_str(),
              nlpmm::format_double(model.base.blend.personal_weight).c_str());
  if (model.temporal.has_value()) {
    if (model.variant == nlpmm::Variant::NlpmmDc) {
      std::printf("clusters=%d pools=%zu seed=%llu\n", model.temporal->cluster_count,
                  model.temporal->pools.size(),
                  static_cast<unsigned long long>(model.temporal->seed));
      if (model.temporal->cluster_count == 1) {
        std::printf("note equivalent-to-base (single cluster)\n");
      }
    } else {
      std::printf("bins=%d seed=%llu\n", model.temporal->bins.bin_count,
                  static_cast<unsigned long long>(model.temporal->seed));
      if (model.temporal->bins.bin_count == 1) {
        std::printf("note equivalent-to-base (single bin)\n");
      }
    }
  }
  return 0;
}

int cmd_predict(const CliOptions& options) {
  const nlpmm::Model model = nlpmm::load_model_file(options.input);
  if (options.topk < 1) throw std::invalid_argument("k must be >= 1");

  const auto object = model.objects.find(options.object);
  // unknown objects are legal: the personal model simply has no information
  const nlpmm::ObjectId object_id =
      object.has_value() ? *object : static_cast<nlpmm::ObjectId>(model.objects.size());

  std::vector<nlpmm::TrajectoryUnit> context;
  const nlpmm::Timestamp when = nlpmm::parse_timestamp(options.time);
  const std::vector<std::string> names = nlpmm::split(options.context, ',');
  if (names.empty() || options.context.empty()) {
    throw std::invalid_argument("context must list at least one location");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto location = model.locations.find(names[i]);
    if (!location.has_value()) {
      throw std::invalid_argument("unknown location id: " + names[i]);
    }
    const nlpmm::Timestamp offset =
        static_cast<nlpmm::Timestamp>(names.size() - 1 - i);
    context.push_back({*location, when - offset});
  }

  const nlpmm::Prediction prediction =
      nlpmm::predict(model, object_id, context, static_cast<std::size_t>(options.topk));
  for (std::size_t rank = 0; rank < prediction.ranked.size(); ++rank) {
    std::printf("%zu %s %s\n", rank + 1,
                model.locations.name(prediction.ranked[rank]).c_str(),
                nlpmm::format_double(prediction.scores[rank]).c_str());
  }
  if (!prediction.informative) {
    std::fprintf(stderr, "warning: no model information for this context\n");
  }
  return 0;
}

int cmd_evaluate(const CliOptions& options) {
  const nlpmm::TrajectoryStore store = nlpmm::load_store_file(options.input);
  nlpmm::ExperimentConfig experiment;
  experiment.train = train_config(options);
  experiment.top_k = static_cast<std::size_t>(options.topk);
  experiment.split_fraction = options.split;
  experiment.runs = options.runs;
  experiment.seed = options.seed;
  experiment.gap_seconds = options.gap;

  const nlpmm::EvalReport report =
      nlpmm::run_experiment(store.trajectories, store.location_count(), experiment);

  std::ofstream out(options.output);
  if (!out) throw nlpmm::IoError("cannot write " + options.output);
  nlpmm::write_report(out, report);
  if (!out.good()) throw nlpmm::IoError("write failed: " + options.output);

  std::printf("%s\n", config_echo(options, "evaluate").c_str());
  std::printf("mean coverage=%.4f accuracy@%d=%.4f one_error=%.4f "
              "average_precision=%.4f examples=%zu\n",
              report.mean.coverage, options.topk, report.mean.accuracy.back(),
              report.mean.one_error, report.mean.average_precision,
              report.mean.example_count);
  return 0;
}

int cmd_synth(const CliOptions& options) {
  nlpmm::SynthConfig config;
  config.location_count = options.synth_locations;
  config.object_count = options.synth_objects;
  config.trajectories_per_object = options.synth_per_object;
  config.singleton_fraction = options.synth_singleton;
  config.out_degree = options.synth_degree;
  config.personal_bias = options.synth_bias;
  config.span_seconds = options.span;
  config.seed = options.seed;
  if (options.synth_regimes < 1) {
    throw std::invalid_argument("regimes must be >= 1");
  }
  const std::int64_t width = options.span / options.synth_regimes;
  for (int r = 0; r < options.synth_regimes; ++r) {
    const std::int64_t begin = r * width;
    const std::int64_t end =
        (r + 1 == options.synth_regimes) ? options.span : begin + width;
    config.regimes.push_back(nlpmm::RegimeSpec{begin, end, {}});
  }

  const nlpmm::SynthOutput output = nlpmm::generate(config);
  std::ofstream records(options.output);
  if (!records) throw nlpmm::IoError("cannot write " + options.output);
  nlpmm::write_records(records, output);
  if (!records.good()) throw nlpmm::IoError("write failed: " + options.output);

  if (!options.truth_output.empty()) {
    std::ofstream truth(options.truth_output);
    if (!truth) throw nlpmm::IoError("cannot write " + options.truth_output);
    nlpmm::write_ground_truth(truth, output.truth);
  }
  std::printf("%s\n", config_echo(options, "synth").c_str());
  std::printf("trajectories=%zu locations=%u objects=%u regimes=%zu\n",
              output.trajectories.size(), config.location_count,
              config.object_count, config.regimes.size());
  return 0;
}

void add_common_flags(CLI::App* app, CliOptions& options) {
  app->add_option("--variant", options.variant,
                  "model variant: nlpmm | nlpmm-tb | nlpmm-dc | gmm | pmm");
  app->add_option("--order", options.order, "maximum Markov order N");
  app->add_option("--bins", options.bins, "time bins per cycle M");
  app->add_option("--clusters", options.clusters, "cluster count Q");
  app->add_option("--topk", options.topk, "ranking depth k");
  app->add_option("--gap", options.gap, "sessionization gap in seconds");
  app->add_option("--split", options.split, "training split fraction");
  app->add_option("--runs", options.runs, "number of evaluation runs");
  app->add_option("--span", options.span, "cycle length in seconds");
  app->add_option("--offset", options.offset, "local-time offset in seconds");
  app->add_option("--blend-holdout", options.blend_holdout,
                  "fraction of training trajectories held out for the blend fit");
  app->add_option("--config", "flat key=value config file (flags take precedence)");
}

// Expands "--config FILE" into "--key value" tokens placed right after the
// subcommand, so explicit flags (parsed take-last) override the file.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string config_path;
  for (std::size_t i = 1; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw nlpmm::IoError("cannot open config file " + config_path);
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw nlpmm::ParseError(line_no, "config lines must be key=value");
    }
    injected.push_back("--" + line.substr(0, eq));
    injected.push_back(line.substr(eq + 1));
  }
  // insert after the subcommand token (the first non-flag argument)
  std::size_t at = 1;
  while (at < args.size() && !args[at].empty() && args[at][0] == '-') ++at;
  if (at < args.size()) ++at;
  args.insert(args.begin() + at, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"next-location prediction with blended Markov models"};
  app.require_subcommand(1);
  CliOptions options;

  CLI::App* ingest = app.add_subcommand("ingest", "parse records into a trajectory store");
  ingest->add_option("--input", options.input, "raw records file")->required();
  ingest->add_option("--output", options.output, "trajectory store file")->required();
  ingest->add_option("--delimiter", options.delimiter, "field delimiter");
  ingest->add_flag("--header", options.header, "skip a header line");
  add_common_flags(ingest, options);

  CLI::App* train = app.add_subcommand("train", "train a model from a store");
  train->add_option("--input", options.input, "trajectory store file")->required();
  train->add_option("--output", options.output, "model file")->required();
  train->add_option("--seed", options.seed, "training seed");
  add_common_flags(train, options);

  CLI::App* predict = app.add_subcommand("predict", "rank next locations");
  predict->add_option("--input", options.input, "model file")->required();
  predict->add_option("--object", options.object, "external object id")->required();
  predict->add_option("--context", options.context,
                      "comma-separated location ids, oldest first")->required();
  predict->add_option("--time", options.time, "query timestamp (ISO-8601 or epoch)")
      ->required();
  add_common_flags(predict, options);

  CLI::App* evaluate = app.add_subcommand("evaluate", "run a train/test experiment");
  evaluate->add_option("--input", options.input, "trajectory store file")->required();
  evaluate->add_option("--output", options.output, "report file")->required();
  evaluate->add_option("--seed", options.seed, "experiment seed")->required();
  add_common_flags(evaluate, options);

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--output", options.output, "records file")->required();
  synth->add_option("--seed", options.seed, "generator seed")->required();
  synth->add_option("--truth", options.truth_output, "ground-truth file");
  synth->add_option("--locations", options.synth_locations, "location count");
  synth->add_option("--objects", options.synth_objects, "object count");
  synth->add_option("--per-object", options.synth_per_object,
                    "trajectories per object");
  synth->add_option("--singleton-fraction", options.synth_singleton,
                    "target fraction of single-unit trajectories");
  synth->add_option("--out-degree", options.synth_degree, "graph out-degree");
  synth->add_option("--personal-bias", options.synth_bias,
                    "strength of per-object preferences");
  synth->add_option("--regimes", options.synth_regimes,
                    "number of equal regime windows");
  add_common_flags(synth, options);

  // repeated options keep the last value, so config-injected tokens lose to
  // explicit flags placed after them
  for (CLI::App* sub : {ingest, train, predict, evaluate, synth}) {
    for (CLI::Option* option : sub->get_options()) {
      if (option->get_expected_min() > 0) {
        option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      }
    }
  }

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    // CLI11 consumes reversed argument lists
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const nlpmm::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }

  try {
    if (app.got_subcommand(ingest)) return cmd_ingest(options);
    if (app.got_subcommand(train)) return cmd_train(options);
    if (app.got_subcommand(predict)) return cmd_predict(options);
    if (app.got_subcommand(evaluate)) return cmd_evaluate(options);
    if (app.got_subcommand(synth)) return cmd_synth(options);
  } catch (const nlpmm::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }
  return 0;
}
