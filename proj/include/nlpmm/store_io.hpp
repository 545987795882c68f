#pragma once

#include <iosfwd>
#include <string>

#include "nlpmm/trajectory.hpp"

namespace nlpmm {

// Versioned text format; writing is deterministic so identical stores produce
// identical bytes.
void save_store(std::ostream& out, const TrajectoryStore& store);
TrajectoryStore load_store(std::istream& in);

void save_store_file(const std::string& path, const TrajectoryStore& store);
TrajectoryStore load_store_file(const std::string& path);

}  // namespace nlpmm
