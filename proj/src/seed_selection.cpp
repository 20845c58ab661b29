#include "dimp/seed_selection.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "dimp/error.hpp"
#include "dimp/random.hpp"

namespace dimp {
namespace {

struct HeapEntry {
  std::size_t gain;
  NodeId node;
  std::size_t round;  // selection round in which `gain` was last computed
};

// Max-heap on gain, then on smaller node id.
struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.gain != b.gain ? a.gain < b.gain : a.node > b.node;
  }
};

double relative_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

SelectionResult greedy_select(const RRCollection& c, std::size_t k) {
  if (k == 0) throw ArgumentError("greedy_select: k must be at least 1");
  SelectionResult result;
  if (c.empty()) return result;

  std::vector<HeapEntry> entries;
  for (NodeId v = 0; v < c.node_count(); ++v) {
    const std::size_t gain = c.sets_containing(v).size();
    if (gain > 0) entries.push_back({gain, v, 0});
  }
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap(HeapOrder{},
                                                                         std::move(entries));
  std::vector<char> covered(c.size(), 0);

  for (std::size_t round = 0; round < k && !heap.empty();) {
    HeapEntry top = heap.top();
    heap.pop();
    if (top.round != round) {
      std::size_t gain = 0;
      for (SetIndex i : c.sets_containing(top.node)) gain += covered[i] ? 0 : 1;
      if (gain > 0) heap.push({gain, top.node, round});
      continue;
    }
    for (SetIndex i : c.sets_containing(top.node)) covered[i] = 1;
    result.seeds.push_back(top.node);
    result.marginal_coverage.push_back(top.gain);
    result.total_coverage += top.gain;
    ++round;
  }
  result.rr_influence_estimate = static_cast<double>(c.node_count()) *
                                 static_cast<double>(result.total_coverage) /
                                 static_cast<double>(c.size());
  return result;
}

std::size_t initial_sample_size(std::size_t n, const SampleSizePolicy& policy) {
  const double nd = static_cast<double>(n);
  const double raw = n > 1 ? policy.c0 * nd * std::log2(nd) / (policy.epsilon * policy.epsilon)
                           : 0.0;
  const double clamped = std::clamp(std::ceil(raw), static_cast<double>(policy.min_size),
                                    static_cast<double>(policy.max_size));
  return static_cast<std::size_t>(clamped);
}

std::size_t decide_sample_size(const Graph& g, std::size_t k, const SampleSizePolicy& policy,
                               std::uint64_t seed, const BuildOptions& options) {
  if (policy.mode == SampleSizeMode::kFixed) {
    if (policy.fixed_size == 0) throw ArgumentError("sample size policy: fixed size must be >= 1");
    return policy.fixed_size;
  }
  if (!(policy.epsilon > 0.0)) throw ArgumentError("sample size policy: epsilon must be positive");
  if (policy.min_size == 0 || policy.min_size > policy.max_size)
    throw ArgumentError("sample size policy: need 1 <= min_size <= max_size");

  std::size_t size = initial_sample_size(g.node_count(), policy);
  // |a - b| / max(a, b) never exceeds 1, so a threshold of 1 accepts any start.
  if (policy.stability_threshold >= 1.0) return size;

  auto estimate = [&](std::size_t n_r) {
    const auto c = build_collection(g, n_r, derive_seed(seed, {stream::kSampleSize, n_r}), options);
    return greedy_select(c, k).rr_influence_estimate;
  };
  double previous = estimate(size);
  while (size <= policy.max_size / 2) {
    const std::size_t next = size * 2;
    const double current = estimate(next);
    if (relative_change(previous, current) < policy.stability_threshold) return next;
    size = next;
    previous = current;
  }
  return size;
}

EndToEndSelection select_seeds_end_to_end(const Graph& g, std::size_t k,
                                          const SampleSizePolicy& policy, std::uint64_t seed,
                                          const BuildOptions& options) {
  EndToEndSelection out;
  out.sample_size = decide_sample_size(g, k, policy, seed, options);
  out.collection = build_collection(g, out.sample_size, seed, options);
  out.selection = greedy_select(out.collection, k);
  return out;
}

}  // namespace dimp
