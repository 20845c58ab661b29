#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dimp/graph.hpp"
#include "dimp/random.hpp"
#include "dimp/rr_collection.hpp"
#include "dimp/update_batch.hpp"

namespace dimp::testing {

using NodeSetDistribution = std::map<std::vector<NodeId>, double>;

struct NamedGraph {
  std::string name;
  Graph graph;
};

Graph weighted(std::size_t n, std::vector<WeightedEdge> edges);

/// a->c, b->c at 0.5 (a=0, b=1, c=2).
Graph two_in_edge_graph();

/// Six hand-built graphs with at most 8 edges each.
std::vector<NamedGraph> small_graphs();

/// Random in-tree on n nodes: every node but 0 has one out-edge to a smaller id.
Graph random_in_tree(std::size_t n, Rng& rng);

/// Uniform-root mixture of exact_rr_distribution over all roots.
NodeSetDistribution exact_uniform_root_distribution(const Graph& g);

/// Empirical node-set histogram of a collection, normalized.
NodeSetDistribution histogram(const RRCollection& c);

double total_variation(const NodeSetDistribution& a, const NodeSetDistribution& b);

/// Batch over the given edge ids with independent doubling or halving,
/// clamped at 1.0; edges at 1.0 are halved.
UpdateBatch batch_for_edges(const Graph& g, const std::vector<EdgeId>& edges, Rng& rng);

/// Collection over explicit node lists; each set's parents all point at the first node.
RRCollection collection_of(std::size_t n, const std::vector<std::vector<NodeId>>& node_lists);

/// Reference greedy: full rescan each round, smallest id on ties, stops at zero gain.
std::vector<NodeId> naive_greedy(const RRCollection& c, std::size_t k);

/// Best coverage over all node subsets of size min(k, n).
std::size_t exhaustive_best_coverage(const RRCollection& c, std::size_t k);

}  // namespace dimp::testing
