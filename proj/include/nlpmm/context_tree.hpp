#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "nlpmm/types.hpp"

namespace nlpmm {

// Variable-order prefix statistics: maps location-sequence contexts of depth
// 1..max_order to next-location counts. A context <a, b> is stored on the
// path root -> b -> a, i.e. children are keyed by ever-earlier locations.
class ContextTree {
 public:
  struct Node {
    std::map<LocationId, std::uint32_t> children;  // indices into nodes_
    std::map<LocationId, std::uint64_t> counts;    // next-location counts
    std::uint64_t total = 0;
  };

  explicit ContextTree(int max_order = 1);

  int max_order() const { return max_order_; }
  bool empty() const;

  // Registers every (context, next) window of the sequence: for each position
  // j and each depth d in 1..min(j, max_order), counts context
  // seq[j-d..j-1] -> seq[j] once.
  void add_sequence(std::span<const LocationId> sequence);

  // Adds `count` to one (context, next) cell; used by deserialization.
  void add_edge(std::span<const LocationId> context, LocationId next,
                std::uint64_t count);

  // Node for the exact context, or nullptr.
  const Node* find(std::span<const LocationId> context) const;

  struct Match {
    const Node* node = nullptr;
    int depth = 0;
  };

  // Deepest node whose context is a suffix of `context` (depth <= max_order)
  // with positive total. Match.node is nullptr when nothing matches.
  Match longest_match(std::span<const LocationId> context) const;

  // Removes the counts at the exact context node (children survive).
  // Returns false when the node does not exist.
  bool remove_context(std::span<const LocationId> context);

  // Visits every (context, next, count) triple, contexts in sorted path
  // order, next ascending. Deterministic, used for serialization and the
  // counting oracle.
  void visit_edges(const std::function<void(std::span<const LocationId>,
                                            LocationId, std::uint64_t)>& fn) const;

  std::size_t edge_count() const;

 private:
  std::uint32_t child(std::uint32_t node, LocationId location);
  const Node* descend(std::span<const LocationId> context) const;

  std::vector<Node> nodes_;  // nodes_[0] is the empty-context root
  int max_order_;
};

}  // namespace nlpmm
