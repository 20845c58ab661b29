#pragma once

#include <cstdint>
#include <vector>

#include "dimp/graph.hpp"
#include "dimp/rr_collection.hpp"

namespace dimp {

struct SelectionResult {
  std::vector<NodeId> seeds;                  // in selection order
  std::vector<std::size_t> marginal_coverage;  // gain of each pick
  std::size_t total_coverage = 0;
  double rr_influence_estimate = 0.0;
};

/// Lazy greedy max coverage. Stops after k picks or once every set is covered;
/// ties go to the smallest node id.
SelectionResult greedy_select(const RRCollection& c, std::size_t k);

enum class SampleSizeMode { kFixed, kDoubling };

/// How many RR sets to draw. The doubling mode starts at
/// ceil(c0 * n * log2(n) / epsilon^2), clamped to [min_size, max_size], and
/// doubles until the greedy estimate moves by less than stability_threshold
/// (relative) between consecutive sizes.
struct SampleSizePolicy {
  SampleSizeMode mode = SampleSizeMode::kFixed;
  std::size_t fixed_size = 100'000;
  double epsilon = 0.1;
  double ell = 1.0;
  double stability_threshold = 0.01;
  double c0 = 1e-3;
  std::size_t min_size = 1024;
  std::size_t max_size = std::size_t{1} << 22;
};

std::size_t initial_sample_size(std::size_t n, const SampleSizePolicy& policy);

std::size_t decide_sample_size(const Graph& g, std::size_t k, const SampleSizePolicy& policy,
                               std::uint64_t seed, const BuildOptions& options = {});

struct EndToEndSelection {
  SelectionResult selection;
  RRCollection collection;
  std::size_t sample_size = 0;
};

/// decide_sample_size, build_collection and greedy_select in sequence. The
/// collection is returned so the next snapshot can mix it forward.
EndToEndSelection select_seeds_end_to_end(const Graph& g, std::size_t k,
                                          const SampleSizePolicy& policy, std::uint64_t seed,
                                          const BuildOptions& options = {});

}  // namespace dimp
