#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nlpmm/markov.hpp"

namespace nlpmm {

// Coefficients of score = intercept + global_weight * p_global
//                                   + personal_weight * p_personal.
struct BlendWeights {
  double intercept = 0.0;
  double global_weight = 0.0;
  double personal_weight = 0.0;

  bool operator==(const BlendWeights&) const = default;
};

struct BlendExample {
  ProbabilityVector global;
  ProbabilityVector personal;
  LocationId truth = 0;
};

// Least-squares fit of the blend over the stacked per-location system
// (examples * m rows, 3 columns). Rank-deficient systems yield the
// minimum-norm solution. Throws std::invalid_argument on an empty example
// list.
BlendWeights fit_blend(std::span<const BlendExample> examples,
                       std::uint32_t location_count);

// Total squared residual of the stacked system under the given weights.
double blend_residual(const BlendWeights& weights,
                      std::span<const BlendExample> examples,
                      std::uint32_t location_count);

// Raw scores, not renormalized.
std::vector<double> blend_predict(const BlendWeights& weights,
                                  const ProbabilityVector& global,
                                  const ProbabilityVector& personal);

// k highest-scoring locations, descending score, ties broken by ascending id.
// With `restrict`, only those candidates are ranked. k must be >= 1.
std::vector<LocationId> top_k(std::span<const double> scores, std::size_t k,
                              const std::vector<LocationId>* restrict_to = nullptr);

}  // namespace nlpmm
