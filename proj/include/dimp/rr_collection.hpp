#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "dimp/diffusion.hpp"
#include "dimp/graph.hpp"
#include "dimp/rr_set.hpp"

namespace dimp {

/// Multiset of RR sets plus the inverted index node -> containing set slots.
///
/// Index lists are kept sorted by slot, so an incrementally maintained index is
/// element-for-element equal to one rebuilt from scratch.
class RRCollection {
 public:
  RRCollection() = default;
  RRCollection(std::size_t node_count, std::vector<RRSet> sets, std::uint64_t graph_version,
               std::uint64_t master_seed = 0, std::uint64_t generation = 0);

  std::size_t node_count() const { return node_count_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  std::size_t target_size() const { return target_size_; }

  const std::vector<RRSet>& sets() const { return sets_; }
  const RRSet& operator[](SetIndex i) const { return sets_[i]; }

  std::span<const SetIndex> sets_containing(NodeId v) const { return index_[v]; }
  const std::vector<std::vector<SetIndex>>& inverted_index() const { return index_; }

  /// Tag of the graph snapshot the sets were sampled under.
  std::uint64_t graph_version() const { return graph_version_; }
  std::uint64_t master_seed() const { return master_seed_; }
  /// Number of mixing steps applied since the initial build.
  std::uint64_t generation() const { return generation_; }

  /// Sum of set sizes.
  std::size_t total_entries() const;

  /// Replaces the sets at the given slots and patches only the index lists of
  /// nodes those sets touch. Slots must be distinct and in range.
  void replace_slots(std::vector<std::pair<SetIndex, RRSet>> replacements);

  /// Moves the collection to a new snapshot after a mixing step.
  void advance(std::uint64_t graph_version) {
    graph_version_ = graph_version;
    ++generation_;
  }

  /// Moves the sets out, leaving the collection empty.
  std::vector<RRSet> take_sets() && {
    index_.clear();
    return std::move(sets_);
  }

  /// Index built from scratch over the current sets.
  std::vector<std::vector<SetIndex>> rebuild_index() const;

  /// Whole-collection equality (sets, index and header).
  friend bool operator==(const RRCollection&, const RRCollection&) = default;

 private:
  std::size_t node_count_ = 0;
  std::vector<RRSet> sets_;
  std::vector<std::vector<SetIndex>> index_;
  std::size_t target_size_ = 0;
  std::uint64_t graph_version_ = 0;
  std::uint64_t master_seed_ = 0;
  std::uint64_t generation_ = 0;
};

struct BuildOptions {
  std::size_t threads = 1;
};

/// n_r independent RR sets; set i draws from substream (master_seed, i).
RRCollection build_collection(const Graph& g, std::size_t n_r, std::uint64_t master_seed,
                              const BuildOptions& options = {});

/// RR set for slot `slot` of generation `generation`. Generation 0 is the
/// initial build; mixing uses later generations for its top-up sets.
RRSet sample_slot(RRSampler& sampler, const Graph& g, std::uint64_t master_seed,
                  std::uint64_t generation, std::uint64_t slot);

/// Number of sets that contain at least one seed.
std::size_t coverage(const RRCollection& c, const SeedSet& seeds);

/// n * coverage / |sets|.
double estimate_influence_rr(const RRCollection& c, const SeedSet& seeds, std::size_t n);

/// JSON container, format "dimp-rr-collection" version 1.
void save_collection(std::ostream& out, const RRCollection& c);
RRCollection load_collection(std::istream& in);

}  // namespace dimp
