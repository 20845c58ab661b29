#include "dimp/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dimp/error.hpp"

namespace dimp {
namespace {

void require_weights(const Graph& g, const char* who) {
  if (!g.has_weights()) throw ArgumentError(std::string(who) + ": graph has no weights");
}

void require_seeds_in_range(const Graph& g, const SeedSet& seeds) {
  for (NodeId s : seeds.nodes())
    if (s >= g.node_count()) throw ArgumentError("seed id " + std::to_string(s) + " out of range");
}

void require_enumerable(const Graph& g) {
  if (g.edge_count() > kMaxBruteforceEdges)
    throw CapacityError("exhaustive oracle supports at most " +
                        std::to_string(kMaxBruteforceEdges) + " edges, graph has " +
                        std::to_string(g.edge_count()));
}

// Calls visit(mask, probability) for every live-edge world of nonzero probability.
template <class Visit>
void for_each_world(const Graph& g, Visit&& visit) {
  const std::size_t m = g.edge_count();
  const std::uint64_t worlds = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < worlds; ++mask) {
    double prob = 1.0;
    for (EdgeId e = 0; e < m && prob > 0.0; ++e)
      prob *= (mask >> e & 1) ? g.prob(e) : 1.0 - g.prob(e);
    if (prob > 0.0) visit(mask, prob);
  }
}

}  // namespace

SeedSet::SeedSet(std::vector<NodeId> nodes, std::size_t capacity)
    : nodes_(std::move(nodes)), capacity_(capacity) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
    throw ArgumentError("seed set: duplicate node");
  if (nodes_.size() > capacity_) throw ArgumentError("seed set: more nodes than capacity k");
}

SeedSet SeedSet::of(std::vector<NodeId> nodes) {
  const std::size_t k = nodes.size();
  return SeedSet(std::move(nodes), k);
}

IcSimulator::IcSimulator(const Graph& g) : g_(&g), active_(g.node_count()) {
  require_weights(g, "simulate_ic");
}

std::size_t IcSimulator::run(const SeedSet& seeds, Rng& rng) {
  active_.clear();
  frontier_.clear();
  for (NodeId s : seeds.nodes()) {
    active_.insert(s);
    frontier_.push_back(s);
  }
  // frontier_ doubles as the FIFO queue; everything pushed is activated.
  for (std::size_t head = 0; head < frontier_.size(); ++head) {
    const NodeId u = frontier_[head];
    const auto targets = g_->out_targets(u);
    const auto edges = g_->out_edges(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const NodeId v = targets[i];
      if (active_.contains(v)) continue;
      if (rng.coin(g_->prob(edges[i]))) {
        active_.insert(v);
        frontier_.push_back(v);
      }
    }
  }
  return frontier_.size();
}

std::size_t simulate_ic_once(const Graph& g, const SeedSet& seeds, Rng& rng) {
  require_seeds_in_range(g, seeds);
  if (seeds.empty()) throw ArgumentError("simulate_ic_once: empty seed set");
  IcSimulator sim(g);
  return sim.run(seeds, rng);
}

InfluenceEstimate estimate_influence_mc(const Graph& g, const SeedSet& seeds, std::size_t r,
                                        Rng& rng) {
  if (r == 0) throw ArgumentError("estimate_influence_mc: r must be positive");
  if (seeds.empty()) throw ArgumentError("estimate_influence_mc: empty seed set");
  require_seeds_in_range(g, seeds);
  IcSimulator sim(g);
  // Counts are integers, so these sums are exact well past any realistic r.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const double x = static_cast<double>(sim.run(seeds, rng));
    sum += x;
    sum_sq += x * x;
  }
  InfluenceEstimate est;
  est.runs = r;
  est.mean = sum / static_cast<double>(r);
  if (r > 1) {
    const double var = std::max(0.0, (sum_sq - sum * est.mean) / static_cast<double>(r - 1));
    est.standard_error = std::sqrt(var / static_cast<double>(r));
  }
  return est;
}

double exact_influence_bruteforce(const Graph& g, const SeedSet& seeds) {
  require_weights(g, "exact_influence_bruteforce");
  require_enumerable(g);
  require_seeds_in_range(g, seeds);
  NodeMarker reached(g.node_count());
  std::vector<NodeId> queue;
  double expected = 0.0;
  for_each_world(g, [&](std::uint64_t mask, double prob) {
    reached.clear();
    queue.clear();
    for (NodeId s : seeds.nodes()) {
      reached.insert(s);
      queue.push_back(s);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      const auto targets = g.out_targets(u);
      const auto edges = g.out_edges(u);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if ((mask >> edges[i] & 1) && !reached.contains(targets[i])) {
          reached.insert(targets[i]);
          queue.push_back(targets[i]);
        }
      }
    }
    expected += prob * static_cast<double>(queue.size());
  });
  return expected;
}

std::map<std::vector<NodeId>, double> exact_rr_distribution(const Graph& g, NodeId root) {
  require_weights(g, "exact_rr_distribution");
  require_enumerable(g);
  if (root >= g.node_count()) throw ArgumentError("exact_rr_distribution: root out of range");
  std::map<std::vector<NodeId>, double> dist;
  NodeMarker reached(g.node_count());
  std::vector<NodeId> queue;
  for_each_world(g, [&](std::uint64_t mask, double prob) {
    reached.clear();
    queue.assign(1, root);
    reached.insert(root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      const auto sources = g.in_sources(v);
      const EdgeId first = g.first_in_edge(v);
      for (std::size_t i = 0; i < sources.size(); ++i) {
        if ((mask >> (first + i) & 1) && !reached.contains(sources[i])) {
          reached.insert(sources[i]);
          queue.push_back(sources[i]);
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    dist[queue] += prob;
  });
  return dist;
}

}  // namespace dimp
