#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dimp/graph.hpp"
#include "dimp/node_marker.hpp"
#include "dimp/random.hpp"
#include "dimp/rr_collection.hpp"
#include "dimp/rr_set.hpp"
#include "dimp/update_batch.hpp"

namespace dimp {

/// Smoothing constant added to every numerator and denominator of the
/// probability ratios so that weights at 1.0 stay finite.
inline constexpr double kDefaultLambda = 1e-9;

struct ProbabilityChange {
  double old_p;
  double new_p;
};

/// Per-batch lookup shared read-only by every ratio evaluation.
///
/// Holds the changed edges, a bitmap of their target nodes and the dead-edge
/// ratio of every changed target, evaluated once at construction.
class RatioContext {
 public:
  RatioContext(std::size_t node_count, const UpdateBatch& batch, double lambda = kDefaultLambda);

  double lambda() const { return lambda_; }
  const std::vector<NodeId>& changed_targets() const { return changed_targets_; }
  bool is_changed_target(NodeId v) const { return is_target_[v] != 0; }

  /// Old and new weight of (u, v), or nullptr when the edge is unchanged.
  const ProbabilityChange* find_change(NodeId u, NodeId v) const {
    if (!is_target_[v]) return nullptr;
    const auto it = changes_.find(key(u, v));
    return it == changes_.end() ? nullptr : &it->second;
  }

  /// Product over changed in-edges (u, v) of (1 - new + l) / (1 - old + l);
  /// 1.0 for nodes without changed in-edges.
  double dead_ratio(NodeId v) const { return dead_ratio_[v]; }

 private:
  static std::uint64_t key(NodeId u, NodeId v) { return (std::uint64_t{u} << 32) | v; }

  double lambda_;
  std::vector<NodeId> changed_targets_;
  std::vector<char> is_target_;
  std::vector<double> dead_ratio_;
  std::unordered_map<std::uint64_t, ProbabilityChange> changes_;
};

/// Probability ratio of every in-edge of v failing, new over old.
double dead_ratio(NodeId v, const RatioContext& ctx);

/// The same product evaluated over every in-edge of v from two snapshots.
double dead_ratio(NodeId v, const Graph& g_old, const Graph& g_new, double lambda);

/// Approximate p_new(R) / p_old(R) from the BFS edges of R alone: every changed
/// BFS edge contributes ((new + l) / (old + l)) * ((1 - old + l) / (1 - new + l)),
/// every node of R contributes its dead ratio. The dead ratios cancel the
/// failure factor of each BFS edge and account for failed in-edges; changed
/// cross edges are the approximation. Exactly 1.0 when R holds no changed
/// target.
double rr_probability_ratio(const RRSet& r, const RatioContext& ctx);

/// Keep probability of an old set: min(1, ratio).
inline double remain_probability(double ratio) { return ratio < 1.0 ? ratio : 1.0; }

/// Accept probability of a resampled set: max(0, 1 - 1 / ratio).
inline double accept_probability(double ratio) {
  return ratio > 1.0 ? 1.0 - 1.0 / ratio : 0.0;
}

/// Regenerates a rejected set from its old root under g_new. Changed edges and
/// edges reaching outside the old set get fresh coins; unchanged edges between
/// two old members succeed, unchanged edges into the old set from outside fail.
class Resampler {
 public:
  explicit Resampler(std::size_t node_count = 0) : old_(node_count), active_(node_count) {}
  RRSet resample(const RRSet& old, const Graph& g_new, const RatioContext& ctx, Rng& rng);

 private:
  NodeMarker old_;
  NodeMarker active_;
};

RRSet resample_rr_set(const RRSet& old, const Graph& g_new, const RatioContext& ctx, Rng& rng);

struct MixOptions {
  double lambda = kDefaultLambda;
  std::size_t threads = 1;
};

struct MixStats {
  std::size_t input_sets = 0;
  std::size_t kept = 0;  // fast path plus remain-step survivors
  std::size_t resampled_accepted = 0;
  std::size_t fresh = 0;
  std::size_t ratio_fast_path_hits = 0;  // kept without a ratio evaluation
  std::size_t candidates = 0;            // sets holding a changed source
  double wall_time_ms = 0.0;

  double kept_fraction() const {
    return input_sets == 0 ? 1.0 : static_cast<double>(kept) / static_cast<double>(input_sets);
  }
};

struct MixResult {
  RRCollection collection;
  MixStats stats;
};

/// Carries a collection across one batch of weight changes.
///
/// Each set is kept with remain_probability of its ratio; a rejected set is
/// resampled and the result kept with accept_probability of its own ratio. The
/// loop stops once n_r sets are collected, random extras are trimmed and any
/// shortfall is topped up with fresh samples under g_new. Only sets containing
/// a changed target are visited.
///
/// When n_r equals the input size the output keeps slot positions: survivors
/// stay in place, replacements and top-ups fill the rejected slots, and the
/// inverted index is patched rather than rebuilt.
///
/// Throws StaleBatchError when the collection, batch and g_new do not describe
/// consecutive snapshots.
MixResult mix_collection(RRCollection old, const Graph& g_new, const UpdateBatch& batch,
                         std::size_t n_r, const MixOptions& options = {});

}  // namespace dimp
