#include "dimp/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "dimp/error.hpp"
#include "dimp/random.hpp"

namespace dimp {
namespace {

bool valid_prob(double p) { return p > 0.0 && p <= 1.0; }

}  // namespace

Graph::Graph() : topo_(build_topology(0, {}, {})) {}

std::uint64_t Graph::weight_tag(EdgeId e, double p) {
  return derive_seed(std::bit_cast<std::uint64_t>(p), {e});
}

std::shared_ptr<const Graph::Topology> Graph::build_topology(
    std::size_t n, std::vector<Edge> edges, std::vector<std::int64_t> original_ids) {
  if (n >= kNoNode) throw ArgumentError("graph: too many nodes");
  if (edges.size() >= std::numeric_limits<EdgeId>::max())
    throw ArgumentError("graph: too many edges");
  for (const Edge& e : edges) {
    if (e.source >= n || e.target >= n) throw ArgumentError("graph: edge endpoint out of range");
    if (e.source == e.target) throw ArgumentError("graph: self-loop");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.target != b.target ? a.target < b.target : a.source < b.source;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].source == edges[i - 1].source && edges[i].target == edges[i - 1].target)
      throw ArgumentError("graph: duplicate edge");
  }

  auto t = std::make_shared<Topology>();
  t->n = n;
  const std::size_t m = edges.size();
  t->in_offsets.assign(n + 1, 0);
  t->out_offsets.assign(n + 1, 0);
  t->sources.resize(m);
  t->targets.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    t->sources[e] = edges[e].source;
    t->targets[e] = edges[e].target;
    ++t->in_offsets[edges[e].target + 1];
    ++t->out_offsets[edges[e].source + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    t->in_offsets[v + 1] += t->in_offsets[v];
    t->out_offsets[v + 1] += t->out_offsets[v];
  }
  // Edge ids are already grouped by target with ascending source; a counting
  // pass in id order therefore leaves each out-list sorted by target.
  t->out_targets.resize(m);
  t->out_edge_ids.resize(m);
  std::vector<EdgeId> cursor(t->out_offsets.begin(), t->out_offsets.end() - 1);
  for (EdgeId e = 0; e < m; ++e) {
    const EdgeId slot = cursor[t->sources[e]]++;
    t->out_targets[slot] = t->targets[e];
    t->out_edge_ids[slot] = e;
  }

  if (original_ids.empty()) {
    original_ids.resize(n);
    for (std::size_t v = 0; v < n; ++v) original_ids[v] = static_cast<std::int64_t>(v);
  } else if (original_ids.size() != n) {
    throw ArgumentError("graph: original id map has wrong size");
  }
  t->by_original.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!t->by_original.emplace(original_ids[v], static_cast<NodeId>(v)).second)
      throw ArgumentError("graph: duplicate original id");
  }
  t->original_ids = std::move(original_ids);

  std::uint64_t tag = derive_seed(n, {m});
  for (EdgeId e = 0; e < m; ++e) tag = derive_seed(tag, {t->sources[e], t->targets[e]});
  t->tag = tag;
  return t;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges,
                        std::vector<std::int64_t> original_ids) {
  Graph g;
  g.topo_ = build_topology(n, std::vector<Edge>(edges.begin(), edges.end()),
                           std::move(original_ids));
  g.version_ = g.topo_->tag;
  return g;
}

Graph Graph::from_weighted_edges(std::size_t n, std::span<const WeightedEdge> edges) {
  std::vector<Edge> plain;
  plain.reserve(edges.size());
  for (const auto& e : edges) plain.push_back({e.source, e.target});
  Graph g = from_edges(n, plain);
  std::vector<double> probs(edges.size());
  for (const auto& e : edges) probs[*g.find_edge(e.source, e.target)] = e.prob;
  return g.with_probs(std::move(probs));
}

std::optional<EdgeId> Graph::find_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return std::nullopt;
  const auto targets = out_targets(u);
  const auto it = std::lower_bound(targets.begin(), targets.end(), v);
  if (it == targets.end() || *it != v) return std::nullopt;
  return out_edges(u)[static_cast<std::size_t>(it - targets.begin())];
}

std::optional<NodeId> Graph::node_of(std::int64_t original) const {
  const auto it = topo_->by_original.find(original);
  if (it == topo_->by_original.end()) return std::nullopt;
  return it->second;
}

Graph Graph::with_probs(std::vector<double> probs) const {
  if (probs.size() != edge_count()) throw ArgumentError("graph: probability vector has wrong size");
  std::uint64_t version = topo_->tag;
  for (EdgeId e = 0; e < probs.size(); ++e) {
    if (!valid_prob(probs[e])) throw ArgumentError("graph: probability outside (0, 1]");
    version ^= weight_tag(e, probs[e]);
  }
  Graph g;
  g.topo_ = topo_;
  g.probs_ = std::make_shared<const std::vector<double>>(std::move(probs));
  g.version_ = version;
  return g;
}

EdgeListLoad load_edge_list(std::istream& in) {
  std::vector<std::int64_t> original_ids;
  std::unordered_map<std::int64_t, NodeId> ids;
  std::vector<Edge> edges;
  EdgeListLoad result;

  auto intern = [&](std::int64_t raw) {
    auto [it, inserted] = ids.emplace(raw, static_cast<NodeId>(original_ids.size()));
    if (inserted) original_ids.push_back(raw);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const char* p = line.data();
    const char* end = p + line.size();
    auto skip_ws = [&] {
      while (p != end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    };
    skip_ws();
    if (p == end || *p == '#') continue;

    std::int64_t raw[2];
    for (auto& value : raw) {
      skip_ws();
      const auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc() || (next != end && *next != ' ' && *next != '\t' && *next != '\r'))
        throw ParseError("expected two integer node ids", line_no);
      p = next;
    }
    skip_ws();
    if (p != end) throw ParseError("trailing characters after edge", line_no);

    if (raw[0] == raw[1]) {
      ++result.self_loops_dropped;
      continue;
    }
    const NodeId u = intern(raw[0]);
    const NodeId v = intern(raw[1]);
    edges.push_back({u, v});
  }
  if (in.bad()) throw IoError("read error while loading edge list");

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  const auto last = std::unique(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source == b.source && a.target == b.target;
  });
  result.duplicates_collapsed = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());

  const std::size_t n = original_ids.size();
  result.graph = Graph::from_edges(n, edges, std::move(original_ids));
  return result;
}

EdgeListLoad load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path);
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_targets(u)) out << g.original_id(u) << ' ' << g.original_id(v) << '\n';
  }
}

Graph assign_wc_weights(const Graph& g) {
  if (g.edge_count() == 0) throw ArgumentError("assign_wc_weights: graph has no edges");
  std::vector<double> probs(g.edge_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::size_t d = g.in_degree(v);
    const EdgeId first = g.first_in_edge(v);
    for (std::size_t i = 0; i < d; ++i) probs[first + i] = 1.0 / static_cast<double>(d);
  }
  return g.with_probs(std::move(probs));
}

}  // namespace dimp
