#pragma once

#include <iosfwd>
#include <string>

#include "nlpmm/predictor.hpp"

namespace nlpmm {

// Versioned structured-text model document: format tag, variant, dimensions,
// interning tables, blend weights (17 significant digits), flattened context
// trees as (context, next, count) triples, and for the time-aware variants
// the bin/cluster routing plus the recorded RNG seed. Counts round-trip
// losslessly; writing is deterministic.
void save_model(std::ostream& out, const Model& model);
Model load_model(std::istream& in);

void save_model_file(const std::string& path, const Model& model);
Model load_model_file(const std::string& path);

}  // namespace nlpmm
