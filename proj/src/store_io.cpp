#include "nlpmm/store_io.hpp"

#include <fstream>
#include <sstream>

#include "nlpmm/util.hpp"

namespace nlpmm {

namespace {

void write_interner(std::ostream& out, const char* tag, const Interner& interner) {
  out << tag << ' ' << interner.size() << '\n';
  for (std::uint32_t id = 0; id < interner.size(); ++id) {
    out << interner.name(id) << '\t' << id << '\n';
  }
}

Interner read_interner(std::istream& in, const std::string& tag, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(line_no, "unexpected end of store");
  ++line_no;
  std::istringstream header(line);
  std::string got;
  std::size_t count = 0;
  if (!(header >> got >> count) || got != tag) {
    throw ParseError(line_no, "expected '" + tag + " <count>'");
  }
  Interner interner;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ParseError(line_no, "truncated interning table");
    ++line_no;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError(line_no, "missing tab separator");
    const std::string name = line.substr(0, tab);
    const std::uint32_t id =
        static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1)));
    if (interner.intern(name) != id) {
      throw ParseError(line_no, "non-dense interning table");
    }
  }
  return interner;
}

}  // namespace

void save_store(std::ostream& out, const TrajectoryStore& store) {
  out << "nlpmm-store v1\n";
  write_interner(out, "locations", store.locations);
  write_interner(out, "objects", store.objects);
  out << "trajectories " << store.trajectories.size() << '\n';
  for (const Trajectory& t : store.trajectories) {
    out << t.object << '\t' << t.units.size() << '\t';
    for (std::size_t i = 0; i < t.units.size(); ++i) {
      if (i > 0) out << ' ';
      out << t.units[i].location << ':' << t.units[i].time;
    }
    out << '\n';
  }
}

TrajectoryStore load_store(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  if (!std::getline(in, line) || line != "nlpmm-store v1") {
    throw ParseError(1, "not a trajectory store (bad header)");
  }
  ++line_no;

  TrajectoryStore store;
  store.locations = read_interner(in, "locations", line_no);
  store.objects = read_interner(in, "objects", line_no);

  if (!std::getline(in, line)) throw ParseError(line_no, "missing trajectory count");
  ++line_no;
  std::istringstream header(line);
  std::string tag;
  std::size_t count = 0;
  if (!(header >> tag >> count) || tag != "trajectories") {
    throw ParseError(line_no, "expected 'trajectories <count>'");
  }
  store.trajectories.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ParseError(line_no, "truncated trajectories");
    ++line_no;
    std::istringstream row(line);
    Trajectory t;
    std::size_t length = 0;
    if (!(row >> t.object >> length)) throw ParseError(line_no, "bad trajectory row");
    t.units.reserve(length);
    for (std::size_t u = 0; u < length; ++u) {
      std::string unit;
      if (!(row >> unit)) throw ParseError(line_no, "truncated trajectory row");
      const std::size_t colon = unit.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "bad unit format");
      TrajectoryUnit tu;
      tu.location = static_cast<LocationId>(std::stoul(unit.substr(0, colon)));
      tu.time = std::stoll(unit.substr(colon + 1));
      t.units.push_back(tu);
    }
    store.trajectories.push_back(std::move(t));
  }
  return store;
}

void save_store_file(const std::string& path, const TrajectoryStore& store) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  save_store(out, store);
  if (!out.good()) throw IoError("write failed: " + path);
}

TrajectoryStore load_store_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_store(in);
}

}  // namespace nlpmm
