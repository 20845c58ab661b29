#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "dimp/graph.hpp"
#include "dimp/node_marker.hpp"
#include "dimp/random.hpp"

namespace dimp {

/// Distinct seed nodes under a budget k. Nodes are kept sorted.
class SeedSet {
 public:
  SeedSet() = default;
  SeedSet(std::vector<NodeId> nodes, std::size_t capacity);

  /// Capacity equal to the number of nodes.
  static SeedSet of(std::vector<NodeId> nodes);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

 private:
  std::vector<NodeId> nodes_;
  std::size_t capacity_ = 0;
};

struct InfluenceEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t runs = 0;
};

/// Forward IC simulation with reusable scratch space.
class IcSimulator {
 public:
  explicit IcSimulator(const Graph& g);
  /// Number of activated nodes, seeds included.
  std::size_t run(const SeedSet& seeds, Rng& rng);

 private:
  const Graph* g_;
  NodeMarker active_;
  std::vector<NodeId> frontier_;
};

std::size_t simulate_ic_once(const Graph& g, const SeedSet& seeds, Rng& rng);

/// Mean of r independent simulations; standard_error is the sample deviation over sqrt(r).
InfluenceEstimate estimate_influence_mc(const Graph& g, const SeedSet& seeds, std::size_t r,
                                        Rng& rng);

/// Largest edge count the exhaustive oracles accept.
inline constexpr std::size_t kMaxBruteforceEdges = 25;

/// Expected spread summed over all 2^|E| live-edge worlds.
double exact_influence_bruteforce(const Graph& g, const SeedSet& seeds);

/// Distribution of the node set reaching `root` over all live-edge worlds.
/// Keys are sorted node lists.
std::map<std::vector<NodeId>, double> exact_rr_distribution(const Graph& g, NodeId root);

}  // namespace dimp
