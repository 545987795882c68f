// Python bindings over the pipeline-level operations: dataset ingestion,
// synthetic generation, training, prediction, evaluation, and model files.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <variant>

#include "nlpmm/eval.hpp"
#include "nlpmm/model_io.hpp"
#include "nlpmm/predictor.hpp"
#include "nlpmm/records.hpp"
#include "nlpmm/store_io.hpp"
#include "nlpmm/synth.hpp"
#include "nlpmm/trajectory.hpp"

namespace py = pybind11;
using namespace nlpmm;

namespace {

using TimeArg = std::variant<std::int64_t, std::string>;

Timestamp to_timestamp(const TimeArg& value) {
  if (std::holds_alternative<std::int64_t>(value)) {
    return std::get<std::int64_t>(value);
  }
  return parse_timestamp(std::get<std::string>(value));
}

TrajectoryStore load_records_file(const std::string& path, std::int64_t gap,
                                  const std::string& delimiter, bool header) {
  if (delimiter.size() != 1) {
    throw std::invalid_argument("delimiter must be a single character");
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  ParseOptions options;
  options.delimiter = delimiter[0];
  options.has_header = header;
  return make_store(parse_records(in, options), gap);
}

TrajectoryStore synthesize(std::uint32_t locations, std::uint32_t objects,
                           int per_object, double singleton_fraction,
                           int out_degree, double personal_bias, int regimes,
                           int max_length, std::uint64_t seed) {
  SynthConfig config;
  config.location_count = locations;
  config.object_count = objects;
  config.trajectories_per_object = per_object;
  config.singleton_fraction = singleton_fraction;
  config.out_degree = out_degree;
  config.personal_bias = personal_bias;
  config.max_length = max_length;
  config.seed = seed;
  if (regimes < 1) throw std::invalid_argument("regimes must be >= 1");
  const std::int64_t width = config.span_seconds / regimes;
  for (int r = 0; r < regimes; ++r) {
    const std::int64_t begin = r * width;
    const std::int64_t end = (r + 1 == regimes) ? config.span_seconds : begin + width;
    config.regimes.push_back(RegimeSpec{begin, end, {}});
  }
  SynthOutput output = generate(config);
  TrajectoryStore store;
  store.locations = std::move(output.locations);
  store.objects = std::move(output.objects);
  store.trajectories = std::move(output.trajectories);
  return store;
}

TrainConfig make_train_config(const std::string& variant, int order, int bins,
                              int clusters, std::uint64_t seed, double blend_holdout,
                              std::int64_t span, std::int64_t offset) {
  TrainConfig config;
  config.variant = variant_from_string(variant);
  config.order = order;
  config.bin_count = bins;
  config.cluster_count = clusters;
  config.seed = seed;
  config.blend_holdout = blend_holdout;
  config.span_seconds = span;
  config.utc_offset_seconds = offset;
  return config;
}

py::dict metrics_dict(const RunMetrics& metrics) {
  py::dict out;
  out["coverage"] = metrics.coverage;
  out["accuracy"] = metrics.accuracy;
  out["one_error"] = metrics.one_error;
  out["average_precision"] = metrics.average_precision;
  out["examples"] = metrics.example_count;
  return out;
}

py::dict run_evaluation(const TrajectoryStore& store, const std::string& variant,
                        int order, int bins, int clusters, std::size_t k,
                        double split, int runs, std::uint64_t seed,
                        double blend_holdout) {
  ExperimentConfig experiment;
  experiment.train =
      make_train_config(variant, order, bins, clusters, 0, blend_holdout, 86400, 0);
  experiment.top_k = k;
  experiment.split_fraction = split;
  experiment.runs = runs;
  experiment.seed = seed;
  const EvalReport report =
      run_experiment(store.trajectories, store.location_count(), experiment);

  py::dict out;
  out["variant"] = variant;
  out["runs"] = report.runs.size();
  out["mean"] = metrics_dict(report.mean);
  py::list per_run;
  for (const RunMetrics& metrics : report.runs) per_run.append(metrics_dict(metrics));
  out["per_run"] = per_run;
  return out;
}

py::dict predict_dict(const Model& model, const std::string& object,
                      const std::vector<std::string>& context, const TimeArg& when,
                      std::size_t k) {
  const auto object_id = model.objects.find(object);
  if (context.empty()) throw std::invalid_argument("context must be non-empty");
  const Timestamp query_time = to_timestamp(when);
  std::vector<TrajectoryUnit> units;
  units.reserve(context.size());
  for (std::size_t i = 0; i < context.size(); ++i) {
    const auto location = model.locations.find(context[i]);
    if (!location.has_value()) {
      throw std::invalid_argument("unknown location id: " + context[i]);
    }
    const Timestamp offset = static_cast<Timestamp>(context.size() - 1 - i);
    units.push_back({*location, query_time - offset});
  }
  const Prediction prediction = predict(
      model,
      object_id.has_value() ? *object_id
                            : static_cast<ObjectId>(model.objects.size()),
      units, k);

  py::list ranking;
  for (std::size_t i = 0; i < prediction.ranked.size(); ++i) {
    ranking.append(py::make_tuple(model.locations.name(prediction.ranked[i]),
                                  prediction.scores[i]));
  }
  py::dict out;
  out["ranking"] = ranking;
  out["covered"] = prediction.covered;
  out["informative"] = prediction.informative;
  out["used_fallback"] = prediction.used_fallback;
  return out;
}

py::dict stats_dict(const TrajectoryStore& store) {
  const CandidateMap candidates =
      induce_candidates(store.trajectories, store.location_count());
  const DatasetStats stats = dataset_stats(store.trajectories, candidates);
  py::dict out;
  out["trajectories"] = stats.trajectory_count;
  out["records"] = stats.record_count;
  out["singleton_fraction"] = stats.singleton_fraction;
  out["mean_candidate_count"] = stats.mean_candidate_count;
  py::dict histogram;
  for (const auto& [length, count] : stats.length_histogram) {
    histogram[py::int_(length)] = count;
  }
  out["length_histogram"] = histogram;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "next-location prediction with blended global/personal Markov models";

  py::class_<TrajectoryStore>(m, "Store")
      .def_property_readonly("location_count", &TrajectoryStore::location_count)
      .def_property_readonly(
          "object_count",
          [](const TrajectoryStore& s) { return s.objects.size(); })
      .def_property_readonly(
          "trajectory_count",
          [](const TrajectoryStore& s) { return s.trajectories.size(); })
      .def("stats", &stats_dict)
      .def("save", [](const TrajectoryStore& s, const std::string& path) {
        save_store_file(path, s);
      })
      .def_static("load", &load_store_file);

  py::class_<Model>(m, "Model")
      .def_property_readonly(
          "variant", [](const Model& model) { return to_string(model.variant); })
      .def_property_readonly(
          "location_count", [](const Model& model) { return model.location_count; })
      .def_property_readonly("order", [](const Model& model) { return model.order; })
      .def("predict", &predict_dict, py::arg("object"), py::arg("context"),
           py::arg("time"), py::arg("k") = 1)
      .def("save",
           [](const Model& model, const std::string& path) {
             save_model_file(path, model);
           })
      .def_static("load", &load_model_file);

  m.def("load_records", &load_records_file, py::arg("path"), py::arg("gap") = 1800,
        py::arg("delimiter") = ",", py::arg("header") = false,
        "Parse a records file and sessionize it into a Store.");

  m.def("synthesize", &synthesize, py::arg("locations") = 20,
        py::arg("objects") = 200, py::arg("per_object") = 10,
        py::arg("singleton_fraction") = 0.73, py::arg("out_degree") = 5,
        py::arg("personal_bias") = 0.0, py::arg("regimes") = 1,
        py::arg("max_length") = 8, py::arg("seed") = 1,
        "Generate a deterministic synthetic Store with planted regimes.");

  m.def(
      "train",
      [](const TrajectoryStore& store, const std::string& variant, int order,
         int bins, int clusters, std::uint64_t seed, double blend_holdout,
         std::int64_t span, std::int64_t offset) {
        return train_model(store, make_train_config(variant, order, bins, clusters,
                                                    seed, blend_holdout, span, offset));
      },
      py::arg("store"), py::arg("variant") = "nlpmm", py::arg("order") = 3,
      py::arg("bins") = 24, py::arg("clusters") = 5, py::arg("seed") = 0,
      py::arg("blend_holdout") = 0.0, py::arg("span") = 86400,
      py::arg("offset") = 0, "Train a model of the given variant from a Store.");

  m.def("evaluate", &run_evaluation, py::arg("store"), py::arg("variant") = "nlpmm",
        py::arg("order") = 3, py::arg("bins") = 24, py::arg("clusters") = 5,
        py::arg("k") = 1, py::arg("split") = 0.7, py::arg("runs") = 50,
        py::arg("seed") = 0, py::arg("blend_holdout") = 0.0,
        "Run shuffled train/test experiments and return the averaged metrics.");
}
