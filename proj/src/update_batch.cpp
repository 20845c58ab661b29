#include "dimp/update_batch.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "dimp/error.hpp"

namespace dimp {
namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

EdgeId require_edge(const Graph& g, NodeId u, NodeId v) {
  const auto e = g.find_edge(u, v);
  if (!e) throw ArgumentError("update batch: edge (" + std::to_string(u) + "," +
                              std::to_string(v) + ") not in graph");
  return *e;
}

std::string format_prob(double p) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, end);
}

}  // namespace

UpdateBatch UpdateBatch::inverse() const {
  UpdateBatch inv;
  inv.timestep = timestep;
  inv.deltas.reserve(deltas.size());
  for (const auto& d : deltas) inv.deltas.push_back({d.u, d.v, d.new_p, d.old_p, false});
  return inv;
}

UpdateBatch generate_random_updates(const Graph& g, std::size_t count, Rng& rng,
                                    std::int64_t timestep) {
  if (!g.has_weights()) throw ArgumentError("generate_random_updates: graph has no weights");
  const std::size_t m = g.edge_count();
  if (count > m) throw ArgumentError("generate_random_updates: count exceeds edge count");

  UpdateBatch batch;
  batch.timestep = timestep;
  batch.base_version = g.version();
  batch.deltas.reserve(count);

  // Partial Fisher-Yates over edge ids.
  std::vector<EdgeId> ids(m);
  for (EdgeId e = 0; e < m; ++e) ids[e] = e;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_index(m - i);
    std::swap(ids[i], ids[j]);
    const EdgeId e = ids[i];
    const double old_p = g.prob(e);
    const bool doubling = rng.coin(0.5);
    WeightDelta d{g.source(e), g.target(e), old_p, 0.0, false};
    if (doubling && old_p < 1.0) {
      d.new_p = old_p * 2.0;
      if (d.new_p > 1.0) {
        d.new_p = 1.0;
        d.clamped = true;
      }
    } else {
      d.new_p = old_p / 2.0;
    }
    batch.deltas.push_back(d);
  }
  return batch;
}

Graph apply_update_batch(const Graph& g, const UpdateBatch& batch) {
  if (!g.has_weights()) throw ArgumentError("apply_update_batch: graph has no weights");
  if (batch.base_version && *batch.base_version != g.version())
    throw StaleBatchError("apply_update_batch: batch was generated against a different snapshot");
  if (batch.empty()) return g;

  std::vector<double> probs(g.probs().begin(), g.probs().end());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(batch.size() * 2);
  for (const auto& d : batch.deltas) {
    if (!seen.insert(pair_key(d.u, d.v)).second)
      throw ArgumentError("apply_update_batch: duplicate edge in batch");
    const EdgeId e = require_edge(g, d.u, d.v);
    if (probs[e] != d.old_p)
      throw StaleBatchError("apply_update_batch: old_p does not match current weight of (" +
                            std::to_string(d.u) + "," + std::to_string(d.v) + ")");
    if (!(d.new_p > 0.0 && d.new_p <= 1.0))
      throw ArgumentError("apply_update_batch: new_p outside (0, 1]");
    probs[e] = d.new_p;
  }
  return g.with_probs(std::move(probs));
}

std::vector<NodeId> changed_source_nodes(const UpdateBatch& batch) {
  std::vector<NodeId> sources;
  sources.reserve(batch.size());
  for (const auto& d : batch.deltas) sources.push_back(d.u);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  return sources;
}

std::vector<NodeId> changed_target_nodes(const UpdateBatch& batch) {
  std::vector<NodeId> targets;
  targets.reserve(batch.size());
  for (const auto& d : batch.deltas) targets.push_back(d.v);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  return targets;
}

std::uint64_t version_after(std::uint64_t base_version, const Graph& topology,
                            const UpdateBatch& batch) {
  std::uint64_t version = base_version;
  for (const auto& d : batch.deltas) {
    const EdgeId e = require_edge(topology, d.u, d.v);
    version ^= Graph::weight_tag(e, d.old_p) ^ Graph::weight_tag(e, d.new_p);
  }
  return version;
}

void write_update_batch_csv(std::ostream& out, const Graph& g, const UpdateBatch& batch) {
  out << "u,v,old_p,new_p\n";
  for (const auto& d : batch.deltas) {
    out << g.original_id(d.u) << ',' << g.original_id(d.v) << ',' << format_prob(d.old_p) << ','
        << format_prob(d.new_p) << '\n';
  }
}

UpdateBatch read_update_batch_csv(std::istream& in, const Graph& g) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("update batch: missing header", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v,old_p,new_p") throw ParseError("update batch: bad header", line_no);

  UpdateBatch batch;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    std::int64_t ids[2];
    double probs[2];
    auto expect_comma = [&] {
      if (p == end || *p != ',') throw ParseError("update batch: expected ','", line_no);
      ++p;
    };
    for (int i = 0; i < 2; ++i) {
      const auto [next, ec] = std::from_chars(p, end, ids[i]);
      if (ec != std::errc()) throw ParseError("update batch: bad node id", line_no);
      p = next;
      expect_comma();
    }
    for (int i = 0; i < 2; ++i) {
      const auto [next, ec] = std::from_chars(p, end, probs[i]);
      if (ec != std::errc()) throw ParseError("update batch: bad probability", line_no);
      p = next;
      if (i == 0) expect_comma();
    }
    if (p != end) throw ParseError("update batch: trailing characters", line_no);

    const auto u = g.node_of(ids[0]);
    const auto v = g.node_of(ids[1]);
    if (!u || !v) throw ParseError("update batch: unknown node id", line_no);
    if (probs[0] == probs[1]) throw ParseError("update batch: old_p equals new_p", line_no);
    batch.deltas.push_back({*u, *v, probs[0], probs[1], false});
  }
  return batch;
}

}  // namespace dimp
