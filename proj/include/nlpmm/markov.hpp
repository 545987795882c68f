#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "nlpmm/context_tree.hpp"
#include "nlpmm/types.hpp"

namespace nlpmm {

// Dense distribution over the m locations. Entries are non-negative and sum
// to 1, or the vector is all-zero ("no information").
using ProbabilityVector = std::vector<double>;

bool is_zero_vector(const ProbabilityVector& v);

// One-hot vector marking the true next location.
ProbabilityVector indicator_vector(LocationId truth, std::uint32_t location_count);

// P(l) = count of l among the units / total unit count; all-zero without units.
ProbabilityVector zero_order_distribution(std::span<const LocationId> unit_locations,
                                          std::uint32_t location_count);

// Variable-order model over all trajectories. Prediction follows the longest
// suffix of the query context present in the tree.
class GlobalMarkovModel {
 public:
  GlobalMarkovModel() : GlobalMarkovModel(0, 1) {}
  GlobalMarkovModel(std::uint32_t location_count, int order)
      : tree_(order), location_count_(location_count) {}

  static GlobalMarkovModel train(const std::vector<std::vector<LocationId>>& sequences,
                                 std::uint32_t location_count, int order);

  ProbabilityVector predict(std::span<const LocationId> context) const;

  const ContextTree& tree() const { return tree_; }
  ContextTree& tree() { return tree_; }
  std::uint32_t location_count() const { return location_count_; }
  int order() const { return tree_.max_order(); }

 private:
  ContextTree tree_;
  std::uint32_t location_count_;
};

// Per-object trees over that object's multi-unit trajectories plus a
// zero-order location-frequency model over all of its units (singleton
// trajectories contribute there).
class PersonalMarkovModel {
 public:
  struct ObjectModel {
    ContextTree tree{1};
    std::map<LocationId, std::uint64_t> unit_counts;
    std::uint64_t unit_total = 0;
  };

  PersonalMarkovModel() : PersonalMarkovModel(0, 1) {}
  PersonalMarkovModel(std::uint32_t location_count, int order)
      : location_count_(location_count), order_(order) {}

  static PersonalMarkovModel train(const std::vector<Trajectory>& trajectories,
                                   std::uint32_t location_count, int order);

  // Longest suffix match in the object's tree; backs off to the object's
  // zero-order distribution when no context matches; all-zero for unknown
  // objects.
  ProbabilityVector predict(ObjectId object, std::span<const LocationId> context) const;

  ProbabilityVector zero_order(ObjectId object) const;

  ObjectModel& object_model(ObjectId object);  // creates when absent
  const std::map<ObjectId, ObjectModel>& objects() const { return models_; }
  std::uint32_t location_count() const { return location_count_; }
  int order() const { return order_; }

 private:
  std::map<ObjectId, ObjectModel> models_;
  std::uint32_t location_count_;
  int order_;
};

}  // namespace nlpmm
