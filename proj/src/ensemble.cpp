#include "nlpmm/ensemble.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace nlpmm {

BlendWeights fit_blend(std::span<const BlendExample> examples,
                       std::uint32_t location_count) {
  if (examples.empty()) throw std::invalid_argument("no blend examples");

  // Accumulate the 3x3 Gram matrix of the stacked system instead of
  // materializing examples * m rows.
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (const BlendExample& ex : examples) {
    if (ex.global.size() != location_count || ex.personal.size() != location_count) {
      throw std::invalid_argument("blend example vector length mismatch");
    }
    for (std::uint32_t j = 0; j < location_count; ++j) {
      const Eigen::Vector3d x{1.0, ex.global[j], ex.personal[j]};
      const double y = (j == ex.truth) ? 1.0 : 0.0;
      gram += x * x.transpose();
      rhs += y * x;
    }
  }

  // Pseudo-inverse through the eigendecomposition of the symmetric Gram
  // matrix; dropping near-zero eigenvalues yields the minimum-norm solution.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(gram);
  const Eigen::Vector3d values = solver.eigenvalues();
  const double cutoff = values.cwiseAbs().maxCoeff() * 1e-12;
  Eigen::Vector3d inverted = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i) {
    if (values[i] > cutoff) inverted[i] = 1.0 / values[i];
  }
  const Eigen::Vector3d beta =
      solver.eigenvectors() * inverted.asDiagonal() *
      solver.eigenvectors().transpose() * rhs;
  return BlendWeights{beta[0], beta[1], beta[2]};
}

double blend_residual(const BlendWeights& weights,
                      std::span<const BlendExample> examples,
                      std::uint32_t location_count) {
  double total = 0.0;
  for (const BlendExample& ex : examples) {
    for (std::uint32_t j = 0; j < location_count; ++j) {
      const double predicted = weights.intercept +
                               weights.global_weight * ex.global[j] +
                               weights.personal_weight * ex.personal[j];
      const double y = (j == ex.truth) ? 1.0 : 0.0;
      const double r = y - predicted;
      total += r * r;
    }
  }
  return total;
}

std::vector<double> blend_predict(const BlendWeights& weights,
                                  const ProbabilityVector& global,
                                  const ProbabilityVector& personal) {
  if (global.size() != personal.size()) {
    throw std::invalid_argument("model vector length mismatch");
  }
  std::vector<double> scores(global.size());
  for (std::size_t j = 0; j < scores.size(); ++j) {
    scores[j] = weights.intercept + weights.global_weight * global[j] +
                weights.personal_weight * personal[j];
  }
  return scores;
}

std::vector<LocationId> top_k(std::span<const double> scores, std::size_t k,
                              const std::vector<LocationId>* restrict_to) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  std::vector<LocationId> order;
  if (restrict_to != nullptr) {
    order = *restrict_to;
  } else {
    order.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      order[i] = static_cast<LocationId>(i);
    }
  }
  std::sort(order.begin(), order.end(), [&](LocationId a, LocationId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  if (order.size() > k) order.resize(k);
  return order;
}

}  // namespace nlpmm
