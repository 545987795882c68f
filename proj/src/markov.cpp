#include "nlpmm/markov.hpp"

#include "nlpmm/trajectory.hpp"

namespace nlpmm {

bool is_zero_vector(const ProbabilityVector& v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

ProbabilityVector indicator_vector(LocationId truth, std::uint32_t location_count) {
  ProbabilityVector v(location_count, 0.0);
  v.at(truth) = 1.0;
  return v;
}

ProbabilityVector zero_order_distribution(std::span<const LocationId> unit_locations,
                                          std::uint32_t location_count) {
  ProbabilityVector v(location_count, 0.0);
  if (unit_locations.empty()) return v;
  for (LocationId l : unit_locations) v.at(l) += 1.0;
  const double total = static_cast<double>(unit_locations.size());
  for (double& x : v) x /= total;
  return v;
}

namespace {

ProbabilityVector normalized_counts(const ContextTree::Node& node,
                                    std::uint32_t location_count) {
  ProbabilityVector v(location_count, 0.0);
  const double total = static_cast<double>(node.total);
  for (const auto& [next, count] : node.counts) {
    v.at(next) = static_cast<double>(count) / total;
  }
  return v;
}

}  // namespace

GlobalMarkovModel GlobalMarkovModel::train(
    const std::vector<std::vector<LocationId>>& sequences,
    std::uint32_t location_count, int order) {
  GlobalMarkovModel model(location_count, order);
  for (const auto& seq : sequences) {
    model.tree_.add_sequence(seq);
  }
  return model;
}

ProbabilityVector GlobalMarkovModel::predict(std::span<const LocationId> context) const {
  auto match = tree_.longest_match(context);
  if (match.node == nullptr) return ProbabilityVector(location_count_, 0.0);
  return normalized_counts(*match.node, location_count_);
}

PersonalMarkovModel PersonalMarkovModel::train(
    const std::vector<Trajectory>& trajectories, std::uint32_t location_count,
    int order) {
  PersonalMarkovModel model(location_count, order);
  for (const Trajectory& t : trajectories) {
    ObjectModel& om = model.object_model(t.object);
    const std::vector<LocationId> seq = location_sequence(t);
    if (seq.size() > 1) om.tree.add_sequence(seq);
    for (LocationId l : seq) {
      ++om.unit_counts[l];
      ++om.unit_total;
    }
  }
  return model;
}

PersonalMarkovModel::ObjectModel& PersonalMarkovModel::object_model(ObjectId object) {
  auto it = models_.find(object);
  if (it == models_.end()) {
    it = models_.emplace(object, ObjectModel{ContextTree(order_), {}, 0}).first;
  }
  return it->second;
}

ProbabilityVector PersonalMarkovModel::predict(ObjectId object,
                                               std::span<const LocationId> context) const {
  auto it = models_.find(object);
  if (it == models_.end()) return ProbabilityVector(location_count_, 0.0);
  auto match = it->second.tree.longest_match(context);
  if (match.node != nullptr) return normalized_counts(*match.node, location_count_);
  return zero_order(object);
}

ProbabilityVector PersonalMarkovModel::zero_order(ObjectId object) const {
  ProbabilityVector v(location_count_, 0.0);
  auto it = models_.find(object);
  if (it == models_.end() || it->second.unit_total == 0) return v;
  const double total = static_cast<double>(it->second.unit_total);
  for (const auto& [l, count] : it->second.unit_counts) {
    v.at(l) = static_cast<double>(count) / total;
  }
  return v;
}

}  // namespace nlpmm
