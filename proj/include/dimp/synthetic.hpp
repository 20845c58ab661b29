#pragma once

#include <cstddef>
#include <cstdint>

#include "dimp/graph.hpp"

namespace dimp {

/// Citation-style preferential-attachment DAG. Node t joins with
/// `edges_per_node` edges t -> x to earlier nodes x picked with probability
/// proportional to degree + 1, so in-degrees are heavy tailed and every node
/// cites min(edges_per_node, t) others. Stands in for real citation graphs
/// when no SNAP download is around. Unweighted, no self-loops or duplicates.
Graph generate_synthetic_graph(std::size_t nodes, std::size_t edges_per_node, std::uint64_t seed);

}  // namespace dimp
