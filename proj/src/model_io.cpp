#include "nlpmm/model_io.hpp"

#include <fstream>
#include <sstream>

#include "nlpmm/util.hpp"

namespace nlpmm {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // next non-empty line as a token stream
  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty()) return std::istringstream(line);
    }
    throw ParseError(line_no_, std::string("unexpected end of model while reading ") + what);
  }

  std::string next_raw(const char* what) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw ParseError(line_no_, std::string("unexpected end of model while reading ") + what);
    }
    ++line_no_;
    return line;
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

void expect(bool ok, const LineReader& reader, const std::string& message) {
  if (!ok) throw ParseError(reader.line(), message);
}

void write_interner(std::ostream& out, const char* tag, const Interner& interner) {
  out << tag << ' ' << interner.size() << '\n';
  for (std::uint32_t id = 0; id < interner.size(); ++id) {
    out << interner.name(id) << '\t' << id << '\n';
  }
}

Interner read_interner(LineReader& reader, const std::string& tag) {
  auto header = reader.next(tag.c_str());
  std::string got;
  std::size_t count = 0;
  expect(static_cast<bool>(header >> got >> count) && got == tag, reader,
         "expected '" + tag + " <count>'");
  Interner interner;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string line = reader.next_raw("interning table");
    const std::size_t tab = line.rfind('\t');
    expect(tab != std::string::npos, reader, "missing tab in interning table");
    expect(interner.intern(line.substr(0, tab)) ==
               static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1))),
           reader, "non-dense interning table");
  }
  return interner;
}

void write_tree_edges(std::ostream& out, const ContextTree& tree, char prefix) {
  tree.visit_edges([&](std::span<const LocationId> context, LocationId next,
                       std::uint64_t count) {
    out << prefix << ' ' << context.size();
    for (LocationId l : context) out << ' ' << l;
    out << ' ' << next << ' ' << count << '\n';
  });
}

void read_tree_edge(std::istringstream& row, LineReader& reader, char prefix,
                    ContextTree& tree) {
  std::string tag;
  std::size_t depth = 0;
  expect(static_cast<bool>(row >> tag >> depth) && tag.size() == 1 && tag[0] == prefix,
         reader, "bad tree edge row");
  std::vector<LocationId> context(depth);
  for (auto& l : context) expect(static_cast<bool>(row >> l), reader, "short context");
  LocationId next = 0;
  std::uint64_t count = 0;
  expect(static_cast<bool>(row >> next >> count), reader, "bad edge tail");
  tree.add_edge(context, next, count);
}

void write_core(std::ostream& out, const CoreModel& core) {
  out << "core\n";
  out << "blend " << format_double(core.blend.intercept) << ' '
      << format_double(core.blend.global_weight) << ' '
      << format_double(core.blend.personal_weight) << '\n';
  out << "trajectories " << core.trajectory_count << '\n';
  out << "gmm " << core.global.tree().edge_count() << '\n';
  write_tree_edges(out, core.global.tree(), 'g');
  out << "pmm " << core.personal.objects().size() << '\n';
  for (const auto& [object, object_model] : core.personal.objects()) {
    out << "obj " << object << ' ' << object_model.unit_counts.size() << ' '
        << object_model.tree.edge_count() << '\n';
    for (const auto& [location, count] : object_model.unit_counts) {
      out << "z " << location << ' ' << count << '\n';
    }
    write_tree_edges(out, object_model.tree, 'p');
  }
  out << "endcore\n";
}

CoreModel read_core(LineReader& reader, std::uint32_t location_count, int order) {
  auto header = reader.next("core");
  std::string tag;
  expect(static_cast<bool>(header >> tag) && tag == "core", reader, "expected 'core'");

  CoreModel core;
  core.global = GlobalMarkovModel(location_count, order);
  core.personal = PersonalMarkovModel(location_count, order);

  auto blend_row = reader.next("blend");
  std::string b0, b1, b2;
  expect(static_cast<bool>(blend_row >> tag >> b0 >> b1 >> b2) && tag == "blend",
         reader, "expected blend weights");
  core.blend = BlendWeights{parse_double(b0), parse_double(b1), parse_double(b2)};

  auto traj_row = reader.next("trajectories");
  expect(static_cast<bool>(traj_row >> tag >> core.trajectory_count) &&
             tag == "trajectories",
         reader, "expected trajectory count");

  auto gmm_row = reader.next("gmm");
  std::size_t edges = 0;
  expect(static_cast<bool>(gmm_row >> tag >> edges) && tag == "gmm", reader,
         "expected 'gmm <edges>'");
  for (std::size_t i = 0; i < edges; ++i) {
    auto row = reader.next("gmm edge");
    read_tree_edge(row, reader, 'g', core.global.tree());
  }

  auto pmm_row = reader.next("pmm");
  std::size_t object_count = 0;
  expect(static_cast<bool>(pmm_row >> tag >> object_count) && tag == "pmm", reader,
         "expected 'pmm <objects>'");
  for (std::size_t i = 0; i < object_count; ++i) {
    auto row = reader.next("pmm object");
    ObjectId object = 0;
    std::size_t zero_pairs = 0, tree_edges = 0;
    expect(static_cast<bool>(row >> tag >> object >> zero_pairs >> tree_edges) &&
               tag == "obj",
           reader, "bad pmm object row");
    auto& object_model = core.personal.object_model(object);
    for (std::size_t z = 0; z < zero_pairs; ++z) {
      auto zrow = reader.next("zero-order pair");
      LocationId location = 0;
      std::uint64_t count = 0;
      expect(static_cast<bool>(zrow >> tag >> location >> count) && tag == "z", reader,
             "bad zero-order row");
      object_model.unit_counts[location] = count;
      object_model.unit_total += count;
    }
    for (std::size_t e = 0; e < tree_edges; ++e) {
      auto erow = reader.next("pmm edge");
      read_tree_edge(erow, reader, 'p', object_model.tree);
    }
  }

  auto end_row = reader.next("endcore");
  expect(static_cast<bool>(end_row >> tag) && tag == "endcore", reader,
         "expected 'endcore'");
  return core;
}

}  // namespace

void save_model(std::ostream& out, const Model& model) {
  out << "nlpmm-model v1\n";
  out << "variant " << to_string(model.variant) << '\n';
  out << "m " << model.location_count << '\n';
  out << "order " << model.order << '\n';
  write_interner(out, "locations", model.locations);
  write_interner(out, "objects", model.objects);
  write_core(out, model.base);

  if (model.temporal.has_value()) {
    const TemporalModel& temporal = *model.temporal;
    if (model.variant == Variant::NlpmmTb) {
      out << "temporal tb " << temporal.bins.bin_count << ' '
          << temporal.bins.span_seconds << ' ' << temporal.bins.utc_offset_seconds
          << ' ' << temporal.seed << '\n';
      for (int b = 0; b < temporal.bins.bin_count; ++b) {
        out << "bin " << b << '\n';
        write_core(out, temporal.per_bin[b]);
      }
    } else {
      out << "temporal dc " << temporal.bins.bin_count << ' '
          << temporal.bins.span_seconds << ' ' << temporal.bins.utc_offset_seconds
          << ' ' << temporal.seed << ' ' << temporal.cluster_count << '\n';
      out << "assignments "
          << temporal.assignment.size() * static_cast<std::size_t>(temporal.bins.bin_count)
          << '\n';
      for (std::size_t l = 0; l < temporal.assignment.size(); ++l) {
        for (int b = 0; b < temporal.bins.bin_count; ++b) {
          out << "a " << l << ' ' << b << ' ' << temporal.assignment[l][b] << '\n';
        }
      }
      out << "pools " << temporal.pools.size() << '\n';
      for (std::size_t p = 0; p < temporal.pools.size(); ++p) {
        out << "pool " << p << ' ' << temporal.pools[p].bins.size();
        for (BinId b : temporal.pools[p].bins) out << ' ' << b;
        out << '\n';
        write_core(out, temporal.pools[p].model);
      }
      out << "map " << temporal.pool_index.size() * temporal.cluster_count << '\n';
      for (std::size_t l = 0; l < temporal.pool_index.size(); ++l) {
        for (int c = 0; c < temporal.cluster_count; ++c) {
          out << "pm " << l << ' ' << c << ' ' << temporal.pool_index[l][c] << '\n';
        }
      }
    }
  }
  out << "end\n";
}

Model load_model(std::istream& in) {
  LineReader reader(in);
  expect(reader.next_raw("header") == "nlpmm-model v1", reader,
         "not a model document (bad header)");

  Model model;
  std::string tag, value;
  auto variant_row = reader.next("variant");
  expect(static_cast<bool>(variant_row >> tag >> value) && tag == "variant", reader,
         "expected variant");
  model.variant = variant_from_string(value);

  auto m_row = reader.next("m");
  expect(static_cast<bool>(m_row >> tag >> model.location_count) && tag == "m", reader,
         "expected m");
  auto order_row = reader.next("order");
  expect(static_cast<bool>(order_row >> tag >> model.order) && tag == "order", reader,
         "expected order");

  model.locations = read_interner(reader, "locations");
  model.objects = read_interner(reader, "objects");
  model.base = read_core(reader, model.location_count, model.order);

  if (is_time_aware(model.variant)) {
    TemporalModel temporal;
    auto header = reader.next("temporal");
    std::string kind;
    expect(static_cast<bool>(header >> tag >> kind >> temporal.bins.bin_count >>
                             temporal.bins.span_seconds >>
                             temporal.bins.utc_offset_seconds >> temporal.seed) &&
               tag == "temporal",
           reader, "expected temporal header");
    if (model.variant == Variant::NlpmmTb) {
      expect(kind == "tb", reader, "variant/temporal kind mismatch");
      for (int b = 0; b < temporal.bins.bin_count; ++b) {
        auto bin_row = reader.next("bin");
        int bin = -1;
        expect(static_cast<bool>(bin_row >> tag >> bin) && tag == "bin" && bin == b,
               reader, "expected bin header");
        temporal.per_bin.push_back(
            read_core(reader, model.location_count, model.order));
      }
    } else {
      expect(kind == "dc", reader, "variant/temporal kind mismatch");
      expect(static_cast<bool>(header >> temporal.cluster_count), reader,
             "expected cluster count");
      temporal.assignment.assign(model.location_count,
                                 std::vector<int>(temporal.bins.bin_count, 0));
      auto assign_row = reader.next("assignments");
      std::size_t assignments = 0;
      expect(static_cast<bool>(assign_row >> tag >> assignments) && tag == "assignments",
             reader, "expected assignments");
      for (std::size_t i = 0; i < assignments; ++i) {
        auto row = reader.next("assignment");
        std::size_t location = 0;
        int bin = 0, cluster = 0;
        expect(static_cast<bool>(row >> tag >> location >> bin >> cluster) && tag == "a",
               reader, "bad assignment row");
        temporal.assignment.at(location).at(bin) = cluster;
      }
      auto pools_row = reader.next("pools");
      std::size_t pool_count = 0;
      expect(static_cast<bool>(pools_row >> tag >> pool_count) && tag == "pools", reader,
             "expected pools");
      for (std::size_t p = 0; p < pool_count; ++p) {
        auto row = reader.next("pool");
        std::size_t index = 0, bin_count = 0;
        expect(static_cast<bool>(row >> tag >> index >> bin_count) && tag == "pool" &&
                   index == p,
               reader, "bad pool header");
        ClusterPool pool;
        pool.bins.resize(bin_count);
        for (auto& b : pool.bins) {
          expect(static_cast<bool>(row >> b), reader, "short pool bin list");
        }
        pool.model = read_core(reader, model.location_count, model.order);
        temporal.pools.push_back(std::move(pool));
      }
      temporal.pool_index.assign(model.location_count,
                                 std::vector<int>(temporal.cluster_count, -1));
      auto map_row = reader.next("map");
      std::size_t map_count = 0;
      expect(static_cast<bool>(map_row >> tag >> map_count) && tag == "map", reader,
             "expected map");
      for (std::size_t i = 0; i < map_count; ++i) {
        auto row = reader.next("pool map");
        std::size_t location = 0;
        int cluster = 0, pool = 0;
        expect(static_cast<bool>(row >> tag >> location >> cluster >> pool) &&
                   tag == "pm",
               reader, "bad pool map row");
        temporal.pool_index.at(location).at(cluster) = pool;
      }
    }
    model.temporal = std::move(temporal);
  }

  auto end_row = reader.next("end");
  expect(static_cast<bool>(end_row >> tag) && tag == "end", reader, "expected 'end'");
  return model;
}

void save_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  save_model(out, model);
  if (!out.good()) throw IoError("write failed: " + path);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_model(in);
}

}  // namespace nlpmm
