#pragma once

#include <vector>

#include "dimp/graph.hpp"
#include "dimp/node_marker.hpp"
#include "dimp/random.hpp"
#include "dimp/types.hpp"

namespace dimp {

/// Reverse-reachable set with its BFS tree.
///
/// `nodes` is in activation (FIFO) order and starts with the root. `parents[i]`
/// is the node whose in-edge (nodes[i], parents[i]) activated nodes[i]; the
/// root is its own parent. Parents always precede their children.
struct RRSet {
  std::vector<NodeId> nodes;
  std::vector<NodeId> parents;

  NodeId root() const { return nodes.front(); }
  std::size_t size() const { return nodes.size(); }

  friend bool operator==(const RRSet&, const RRSet&) = default;
};

/// Checks the root, parent-in-set and parent-precedes-child invariants.
bool is_valid_rr_set(const RRSet& r, std::size_t node_count);

/// Reverse BFS sampler; holds scratch sized to the graph.
class RRSampler {
 public:
  RRSampler() = default;
  explicit RRSampler(std::size_t node_count) : active_(node_count) {}

  RRSet sample(const Graph& g, Rng& rng);
  RRSet sample_from_root(const Graph& g, NodeId root, Rng& rng);

 private:
  NodeMarker active_;
};

RRSet sample_rr_set(const Graph& g, Rng& rng);
RRSet sample_rr_set_from_root(const Graph& g, NodeId root, Rng& rng);

}  // namespace dimp
