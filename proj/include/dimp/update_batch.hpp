#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dimp/graph.hpp"
#include "dimp/random.hpp"
#include "dimp/types.hpp"

namespace dimp {

struct WeightDelta {
  NodeId u = 0;
  NodeId v = 0;
  double old_p = 0.0;
  double new_p = 0.0;
  bool clamped = false;  // doubling saturated at 1.0
};

/// Edge-weight changes between two consecutive snapshots.
struct UpdateBatch {
  std::vector<WeightDelta> deltas;
  std::int64_t timestep = 0;
  /// Version tag of the snapshot the batch was generated against, when known.
  std::optional<std::uint64_t> base_version;

  bool empty() const { return deltas.empty(); }
  std::size_t size() const { return deltas.size(); }
  UpdateBatch inverse() const;
};

/// Picks `count` distinct edges uniformly without replacement and doubles or
/// halves each weight with equal probability. Doubling clamps to 1.0; an edge
/// already at 1.0 cannot grow and takes the halving branch instead.
UpdateBatch generate_random_updates(const Graph& g, std::size_t count, Rng& rng,
                                    std::int64_t timestep = 1);

/// Returns the next snapshot. Throws StaleBatchError when an old_p does not
/// match the current weight bit for bit, ArgumentError for unknown edges,
/// duplicate pairs or probabilities outside (0, 1].
Graph apply_update_batch(const Graph& g, const UpdateBatch& batch);

/// Sorted, distinct sources u of every (u, v) in the batch.
std::vector<NodeId> changed_source_nodes(const UpdateBatch& batch);

/// Sorted, distinct targets v of every (u, v) in the batch.
std::vector<NodeId> changed_target_nodes(const UpdateBatch& batch);

/// Version tag the snapshot `base_version` would carry after applying `batch`.
/// `topology` supplies edge ids and must share the batch's edge set.
std::uint64_t version_after(std::uint64_t base_version, const Graph& topology,
                            const UpdateBatch& batch);

/// CSV with header `u,v,old_p,new_p`; node ids are the graph's original ids
/// and probabilities are written with round-trip precision.
void write_update_batch_csv(std::ostream& out, const Graph& g, const UpdateBatch& batch);
UpdateBatch read_update_batch_csv(std::istream& in, const Graph& g);

}  // namespace dimp
