#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace smoothwalk {

// Consumer side of a pair stream.
using PairSink = std::function<void(NodeId, NodeId)>;

// A replayable stream of ordered (center, context) pairs. Implementations
// must produce the identical sequence on every scan.
class PairSource {
 public:
  virtual ~PairSource() = default;

  // Number of pairs in one full pass.
  virtual std::uint64_t pair_count() const = 0;

  // Visits pairs in stream order until the visitor returns false or the
  // pass ends. Returns the number of pairs visited.
  virtual std::uint64_t scan(
      const std::function<bool(NodeId, NodeId)>& visit) const = 0;
};

class MaterializedPairs final : public PairSource {
 public:
  MaterializedPairs() = default;
  explicit MaterializedPairs(std::vector<std::pair<NodeId, NodeId>> pairs)
      : pairs_(std::move(pairs)) {}

  std::uint64_t pair_count() const override { return pairs_.size(); }

  std::uint64_t scan(
      const std::function<bool(NodeId, NodeId)>& visit) const override {
    std::uint64_t visited = 0;
    for (const auto& [u, v] : pairs_) {
      ++visited;
      if (!visit(u, v)) break;
    }
    return visited;
  }

  const std::vector<std::pair<NodeId, NodeId>>& pairs() const {
    return pairs_;
  }

 private:
  std::vector<std::pair<NodeId, NodeId>> pairs_;
};

}  // namespace smoothwalk
