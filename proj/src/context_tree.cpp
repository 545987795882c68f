#include "nlpmm/context_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlpmm {

ContextTree::ContextTree(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw std::invalid_argument("max order must be >= 1");
  nodes_.emplace_back();
}

bool ContextTree::empty() const {
  return nodes_.size() == 1 && nodes_[0].counts.empty();
}

std::uint32_t ContextTree::child(std::uint32_t node, LocationId location) {
  auto it = nodes_[node].children.find(location);
  if (it != nodes_[node].children.end()) return it->second;
  std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
  nodes_[node].children.emplace(location, idx);
  nodes_.emplace_back();
  return idx;
}

void ContextTree::add_sequence(std::span<const LocationId> sequence) {
  for (std::size_t j = 1; j < sequence.size(); ++j) {
    const LocationId next = sequence[j];
    std::uint32_t node = 0;
    const std::size_t max_depth =
        std::min<std::size_t>(j, static_cast<std::size_t>(max_order_));
    for (std::size_t d = 1; d <= max_depth; ++d) {
      node = child(node, sequence[j - d]);
      ++nodes_[node].counts[next];
      ++nodes_[node].total;
    }
  }
}

void ContextTree::add_edge(std::span<const LocationId> context, LocationId next,
                           std::uint64_t count) {
  if (context.empty() || context.size() > static_cast<std::size_t>(max_order_)) {
    throw std::invalid_argument("context depth out of range");
  }
  std::uint32_t node = 0;
  for (std::size_t d = 1; d <= context.size(); ++d) {
    node = child(node, context[context.size() - d]);
  }
  nodes_[node].counts[next] += count;
  nodes_[node].total += count;
}

const ContextTree::Node* ContextTree::descend(std::span<const LocationId> context) const {
  const Node* node = &nodes_[0];
  for (std::size_t d = 1; d <= context.size(); ++d) {
    auto it = node->children.find(context[context.size() - d]);
    if (it == node->children.end()) return nullptr;
    node = &nodes_[it->second];
  }
  return node;
}

const ContextTree::Node* ContextTree::find(std::span<const LocationId> context) const {
  return descend(context);
}

ContextTree::Match ContextTree::longest_match(std::span<const LocationId> context) const {
  Match best;
  const Node* node = &nodes_[0];
  const std::size_t max_depth =
      std::min(context.size(), static_cast<std::size_t>(max_order_));
  for (std::size_t d = 1; d <= max_depth; ++d) {
    auto it = node->children.find(context[context.size() - d]);
    if (it == node->children.end()) break;
    node = &nodes_[it->second];
    if (node->total > 0) {
      best.node = node;
      best.depth = static_cast<int>(d);
    }
  }
  return best;
}

bool ContextTree::remove_context(std::span<const LocationId> context) {
  const Node* node = descend(context);
  if (node == nullptr) return false;
  Node* mutable_node = const_cast<Node*>(node);
  mutable_node->counts.clear();
  mutable_node->total = 0;
  return true;
}

void ContextTree::visit_edges(
    const std::function<void(std::span<const LocationId>, LocationId,
                             std::uint64_t)>& fn) const {
  // iterative DFS; path holds the context in natural (oldest-first) order
  std::vector<LocationId> path;
  struct Frame {
    std::uint32_t node;
    std::map<LocationId, std::uint32_t>::const_iterator next_child;
  };
  std::vector<Frame> stack;
  stack.push_back({0, nodes_[0].children.begin()});
  while (!stack.empty()) {
    Frame& frame = stack.back();
    const Node& node = nodes_[frame.node];
    if (frame.next_child == node.children.begin() && !path.empty()) {
      for (const auto& [next, count] : node.counts) {
        fn(path, next, count);
      }
    }
    if (frame.next_child == node.children.end()) {
      stack.pop_back();
      if (!path.empty()) path.erase(path.begin());
      continue;
    }
    auto [location, child_idx] = *frame.next_child;
    ++frame.next_child;
    // children extend the context one step earlier in time
    path.insert(path.begin(), location);
    stack.push_back({child_idx, nodes_[child_idx].children.begin()});
  }
}

std::size_t ContextTree::edge_count() const {
  std::size_t n = 0;
  for (const Node& node : nodes_) n += node.counts.size();
  return n;
}

}  // namespace nlpmm
