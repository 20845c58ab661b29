#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dimp/diffusion.hpp"

namespace dimp::testing {

Graph weighted(std::size_t n, std::vector<WeightedEdge> edges) {
  return Graph::from_weighted_edges(n, edges);
}

Graph two_in_edge_graph() { return weighted(3, {{0, 2, 0.5}, {1, 2, 0.5}}); }

std::vector<NamedGraph> small_graphs() {
  return {
      {"two-in-edge", two_in_edge_graph()},
      {"chain", weighted(4, {{0, 1, 1.0}, {1, 2, 0.7}, {2, 3, 0.4}})},
      {"diamond", weighted(4, {{0, 1, 0.5}, {0, 2, 0.3}, {1, 3, 0.6}, {2, 3, 0.8}, {1, 2, 0.4}})},
      {"cycle", weighted(4, {{0, 1, 0.5}, {1, 2, 0.6}, {2, 0, 0.7}, {0, 3, 0.4}, {3, 2, 0.3}})},
      {"bidirectional-path",
       weighted(4, {{0, 1, 0.5}, {1, 0, 0.4}, {1, 2, 0.6}, {2, 1, 0.3}, {2, 3, 0.7}, {3, 2, 0.2}})},
      {"dense", weighted(4, {{0, 1, 0.5},
                             {1, 0, 0.3},
                             {1, 2, 0.6},
                             {2, 1, 0.4},
                             {2, 3, 0.5},
                             {3, 0, 0.7},
                             {0, 2, 0.2},
                             {3, 1, 0.9}})},
  };
}

Graph random_in_tree(std::size_t n, Rng& rng) {
  std::vector<WeightedEdge> edges;
  for (NodeId u = 1; u < n; ++u) {
    const auto parent = static_cast<NodeId>(rng.uniform_index(u));
    // Weights on a coarse grid including 1.0, so clamped doublings show up.
    const double p = static_cast<double>(1 + rng.uniform_index(8)) / 8.0;
    edges.push_back({u, parent, p});
  }
  return weighted(n, std::move(edges));
}

NodeSetDistribution exact_uniform_root_distribution(const Graph& g) {
  NodeSetDistribution mix;
  const double w = 1.0 / static_cast<double>(g.node_count());
  for (NodeId root = 0; root < g.node_count(); ++root)
    for (const auto& [set, p] : exact_rr_distribution(g, root)) mix[set] += w * p;
  return mix;
}

NodeSetDistribution histogram(const RRCollection& c) {
  NodeSetDistribution h;
  const double w = 1.0 / static_cast<double>(c.size());
  for (const RRSet& r : c.sets()) {
    std::vector<NodeId> key = r.nodes;
    std::sort(key.begin(), key.end());
    h[key] += w;
  }
  return h;
}

double total_variation(const NodeSetDistribution& a, const NodeSetDistribution& b) {
  double sum = 0.0;
  for (const auto& [k, p] : a) {
    const auto it = b.find(k);
    sum += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, p] : b)
    if (!a.count(k)) sum += p;
  return 0.5 * sum;
}

UpdateBatch batch_for_edges(const Graph& g, const std::vector<EdgeId>& edges, Rng& rng) {
  UpdateBatch batch;
  batch.base_version = g.version();
  for (EdgeId e : edges) {
    const double old_p = g.prob(e);
    const bool grow = old_p < 1.0 && rng.coin(0.5);
    const double new_p = grow ? std::min(1.0, old_p * 2.0) : old_p / 2.0;
    batch.deltas.push_back({g.source(e), g.target(e), old_p, new_p, grow && old_p * 2.0 > 1.0});
  }
  return batch;
}

RRCollection collection_of(std::size_t n, const std::vector<std::vector<NodeId>>& node_lists) {
  std::vector<RRSet> sets;
  for (const auto& nodes : node_lists) {
    RRSet r;
    r.nodes = nodes;
    r.parents.assign(nodes.size(), nodes.front());
    sets.push_back(std::move(r));
  }
  return RRCollection(n, std::move(sets), 0);
}

std::vector<NodeId> naive_greedy(const RRCollection& c, std::size_t k) {
  std::vector<char> covered(c.size(), 0);
  std::vector<NodeId> seeds;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best_gain = 0;
    NodeId best = kNoNode;
    for (NodeId v = 0; v < c.node_count(); ++v) {
      std::size_t gain = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (covered[i]) continue;
        const auto& nodes = c.sets()[i].nodes;
        if (std::find(nodes.begin(), nodes.end(), v) != nodes.end()) ++gain;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    if (best_gain == 0) break;
    seeds.push_back(best);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& nodes = c.sets()[i].nodes;
      if (std::find(nodes.begin(), nodes.end(), best) != nodes.end()) covered[i] = 1;
    }
  }
  return seeds;
}

std::size_t exhaustive_best_coverage(const RRCollection& c, std::size_t k) {
  const std::size_t n = c.node_count();
  const std::size_t size = std::min(k, n);
  std::vector<NodeId> chosen;
  std::size_t best = 0;
  std::function<void(NodeId)> recurse = [&](NodeId start) {
    if (chosen.size() == size) {
      best = std::max(best, coverage(c, SeedSet::of(chosen)));
      return;
    }
    for (NodeId v = start; v < n; ++v) {
      chosen.push_back(v);
      recurse(v + 1);
      chosen.pop_back();
    }
  };
  recurse(0);
  return best;
}

}  // namespace dimp::testing
