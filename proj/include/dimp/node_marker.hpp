#pragma once

#include <cstdint>
#include <vector>

#include "dimp/types.hpp"

namespace dimp {

/// O(1)-reset membership marks over dense node ids.
class NodeMarker {
 public:
  explicit NodeMarker(std::size_t n = 0) : stamp_(n, 0) {}

  void resize(std::size_t n) {
    if (stamp_.size() < n) stamp_.resize(n, 0);
  }

  void clear() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  bool contains(NodeId v) const { return stamp_[v] == epoch_; }
  void insert(NodeId v) { stamp_[v] = epoch_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 1;
};

}  // namespace dimp
