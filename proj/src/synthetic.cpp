#include "dimp/synthetic.hpp"

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "dimp/error.hpp"
#include "dimp/random.hpp"

namespace dimp {

Graph generate_synthetic_graph(std::size_t nodes, std::size_t edges_per_node, std::uint64_t seed) {
  if (nodes < 2) throw ArgumentError("synthetic graph: need at least two nodes");
  if (edges_per_node == 0) throw ArgumentError("synthetic graph: edges_per_node must be positive");

  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(nodes * edges_per_node);
  // Each node appears once per incident edge plus once for itself.
  std::vector<NodeId> urn;
  urn.reserve(nodes * (2 * edges_per_node + 1));
  std::unordered_set<NodeId> picked;

  urn.push_back(0);
  for (NodeId t = 1; t < nodes; ++t) {
    const std::size_t want = std::min<std::size_t>(edges_per_node, t);
    picked.clear();
    while (picked.size() < want) {
      const NodeId x = urn[rng.uniform_index(urn.size())];
      if (x == t || !picked.insert(x).second) continue;
      edges.push_back({t, x});
      urn.push_back(x);
      urn.push_back(t);
    }
    urn.push_back(t);
  }
  return Graph::from_edges(nodes, edges);
}

}  // namespace dimp
