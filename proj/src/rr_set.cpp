#include "dimp/rr_set.hpp"

#include <unordered_map>

#include "dimp/error.hpp"

namespace dimp {

bool is_valid_rr_set(const RRSet& r, std::size_t node_count) {
  if (r.nodes.empty() || r.nodes.size() != r.parents.size()) return false;
  if (r.parents[0] != r.nodes[0]) return false;
  std::unordered_map<NodeId, std::size_t> position;
  position.reserve(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    if (r.nodes[i] >= node_count) return false;
    if (!position.emplace(r.nodes[i], i).second) return false;
  }
  for (std::size_t i = 1; i < r.nodes.size(); ++i) {
    const auto it = position.find(r.parents[i]);
    if (it == position.end() || it->second >= i) return false;
  }
  return true;
}

RRSet RRSampler::sample(const Graph& g, Rng& rng) {
  if (g.node_count() == 0) throw ArgumentError("sample_rr_set: empty graph");
  const auto root = static_cast<NodeId>(rng.uniform_index(g.node_count()));
  return sample_from_root(g, root, rng);
}

RRSet RRSampler::sample_from_root(const Graph& g, NodeId root, Rng& rng) {
  if (root >= g.node_count()) throw ArgumentError("sample_rr_set: root out of range");
  if (!g.has_weights() && g.edge_count() > 0) throw ArgumentError("sample_rr_set: graph has no weights");
  active_.resize(g.node_count());
  active_.clear();
  RRSet r;
  r.nodes.push_back(root);
  r.parents.push_back(root);
  active_.insert(root);
  for (std::size_t head = 0; head < r.nodes.size(); ++head) {
    const NodeId v = r.nodes[head];
    const auto sources = g.in_sources(v);
    const auto probs = g.in_probs(v);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const NodeId u = sources[i];
      if (active_.contains(u)) continue;
      if (rng.coin(probs[i])) {
        active_.insert(u);
        r.nodes.push_back(u);
        r.parents.push_back(v);
      }
    }
  }
  return r;
}

RRSet sample_rr_set(const Graph& g, Rng& rng) {
  RRSampler sampler(g.node_count());
  return sampler.sample(g, rng);
}

RRSet sample_rr_set_from_root(const Graph& g, NodeId root, Rng& rng) {
  RRSampler sampler(g.node_count());
  return sampler.sample_from_root(g, root, rng);
}

}  // namespace dimp
