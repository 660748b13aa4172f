#pragma once

#include <cstdint>

namespace smoothwalk {

using NodeId = std::uint32_t;

// Ordered (center, context) pair packed into one 64-bit key.
using PairKey = std::uint64_t;

inline constexpr PairKey pair_key(NodeId center, NodeId context) {
  return (static_cast<PairKey>(center) << 32) | context;
}

inline constexpr NodeId pair_center(PairKey key) {
  return static_cast<NodeId>(key >> 32);
}

inline constexpr NodeId pair_context(PairKey key) {
  return static_cast<NodeId>(key & 0xffffffffu);
}

}  // namespace smoothwalk
