#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace dimp {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using SetIndex = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

}  // namespace dimp
