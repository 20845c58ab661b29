#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dimp/types.hpp"

namespace dimp {

struct Edge {
  NodeId source;
  NodeId target;
};

struct WeightedEdge {
  NodeId source;
  NodeId target;
  double prob;
};

/// Immutable directed graph snapshot with per-edge propagation probabilities.
///
/// Edge ids are positions in the in-adjacency (edges grouped by target, sources
/// ascending), so `in_probs(v)` is a contiguous slice of the probability array.
/// The topology is shared between snapshots; only the probability vector is
/// copied when weights change.
///
/// `version()` is a content tag: a hash of the topology XOR-folded with a hash
/// of every (edge id, probability bits) pair. Equal weights give equal tags, and
/// a weight change updates the tag in O(1).
class Graph {
 public:
  Graph();

  /// Unweighted graph. Rejects duplicate edges, self-loops and ids >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<std::int64_t> original_ids = {});

  /// Weighted graph; every probability must lie in (0, 1].
  static Graph from_weighted_edges(std::size_t n, std::span<const WeightedEdge> edges);

  std::size_t node_count() const { return topo_->n; }
  std::size_t edge_count() const { return topo_->sources.size(); }
  bool has_weights() const { return probs_ != nullptr; }

  std::span<const NodeId> in_sources(NodeId v) const {
    return {topo_->sources.data() + topo_->in_offsets[v], in_degree(v)};
  }
  std::span<const double> in_probs(NodeId v) const {
    if (!probs_) return {};
    return {probs_->data() + topo_->in_offsets[v], in_degree(v)};
  }
  EdgeId first_in_edge(NodeId v) const { return topo_->in_offsets[v]; }

  std::span<const NodeId> out_targets(NodeId u) const {
    return {topo_->out_targets.data() + topo_->out_offsets[u], out_degree(u)};
  }
  std::span<const EdgeId> out_edges(NodeId u) const {
    return {topo_->out_edge_ids.data() + topo_->out_offsets[u], out_degree(u)};
  }

  std::size_t in_degree(NodeId v) const {
    return topo_->in_offsets[v + 1] - topo_->in_offsets[v];
  }
  std::size_t out_degree(NodeId u) const {
    return topo_->out_offsets[u + 1] - topo_->out_offsets[u];
  }

  NodeId source(EdgeId e) const { return topo_->sources[e]; }
  NodeId target(EdgeId e) const { return topo_->targets[e]; }
  double prob(EdgeId e) const { return (*probs_)[e]; }
  std::span<const double> probs() const { return *probs_; }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;

  std::uint64_t version() const { return version_; }

  std::int64_t original_id(NodeId v) const { return topo_->original_ids[v]; }
  std::optional<NodeId> node_of(std::int64_t original) const;

  /// New snapshot over the same topology. Probabilities are validated.
  Graph with_probs(std::vector<double> probs) const;

  /// Contribution of one (edge, probability) pair to the version tag.
  static std::uint64_t weight_tag(EdgeId e, double p);

 private:
  struct Topology {
    std::size_t n = 0;
    std::vector<EdgeId> in_offsets;  // n + 1
    std::vector<NodeId> sources;     // by edge id
    std::vector<NodeId> targets;     // by edge id
    std::vector<EdgeId> out_offsets;  // n + 1
    std::vector<NodeId> out_targets;  // sorted per source
    std::vector<EdgeId> out_edge_ids;
    std::vector<std::int64_t> original_ids;
    std::unordered_map<std::int64_t, NodeId> by_original;
    std::uint64_t tag = 0;
  };

  static std::shared_ptr<const Topology> build_topology(std::size_t n, std::vector<Edge> edges,
                                                         std::vector<std::int64_t> original_ids);

  std::shared_ptr<const Topology> topo_;
  std::shared_ptr<const std::vector<double>> probs_;
  std::uint64_t version_ = 0;
};

struct EdgeListLoad {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

/// Reads a SNAP-style edge list: one "u v" integer pair per line, '#' starts a
/// comment line. Ids are remapped to [0, n) in order of first appearance. The
/// returned graph is unweighted.
EdgeListLoad load_edge_list(std::istream& in);
EdgeListLoad load_edge_list_file(const std::string& path);

/// Writes "u v" lines using original ids.
void write_edge_list(std::ostream& out, const Graph& g);

/// Weighted cascade: p(u,v) = 1 / in_degree(v).
Graph assign_wc_weights(const Graph& g);

}  // namespace dimp
