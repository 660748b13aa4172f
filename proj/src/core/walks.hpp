#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/graph.hpp"
#include "core/stream.hpp"
#include "core/types.hpp"

namespace smoothwalk {

enum class WalkBias { kUniform, kNode2Vec };

struct WalkConfig {
  std::uint32_t walks_per_node = 10;
  std::uint32_t walk_length = 80;
  std::uint32_t window = 10;
  std::uint64_t seed = 1;
  WalkBias bias = WalkBias::kUniform;
  double p = 1.0;  // node2vec return parameter
  double q = 1.0;  // node2vec in-out parameter
  // Cached transition tables for node2vec, keyed by (prev, current) edge.
  std::size_t memo_budget = 1u << 20;
};

// Ordered skip-gram pairs produced by one sequence of the given length
// with a symmetric window of radius `window` around each position.
std::uint64_t pairs_per_sequence(std::uint32_t walk_length,
                                 std::uint32_t window);

// M = n * walks_per_node * pairs_per_sequence. Throws on 64-bit overflow.
std::uint64_t total_pairs(NodeId n, const WalkConfig& cfg);

// Emits (walk[i], walk[j]) for every center i and every j within the
// window, j != i, in ascending j order.
template <typename Visit>
void for_each_skipgram_pair(std::span<const NodeId> walk, std::uint32_t window,
                            Visit&& visit) {
  const std::size_t len = walk.size();
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(len - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i) continue;
      visit(walk[i], walk[j]);
    }
  }
}

std::vector<std::pair<NodeId, NodeId>> skipgram_pairs(
    std::span<const NodeId> walk, std::uint32_t window);

// Regenerates walks on demand. Randomness for walk (node, rep) is derived
// from (seed, node, rep) alone, so any generation order yields the same
// walks. Not thread-safe (node2vec memo); use one instance per thread.
class WalkGenerator {
 public:
  WalkGenerator(const Graph& g, const WalkConfig& cfg);

  void generate(NodeId start, std::uint32_t rep,
                std::vector<NodeId>& out) const;

  const Graph& graph() const { return *g_; }
  const WalkConfig& config() const { return cfg_; }

 private:
  std::span<const double> transition_row(NodeId prev, NodeId current) const;

  const Graph* g_;
  WalkConfig cfg_;
  bool biased_;  // node2vec with (p, q) != (1, 1)
  mutable std::unordered_map<PairKey, std::vector<double>> memo_;
  mutable std::vector<double> scratch_;
};

// The full corpus as a pair stream: nodes in id order, walks_per_node
// walks per node, skip-gram pairs per walk.
class WalkPairStream final : public PairSource {
 public:
  WalkPairStream(const Graph& g, const WalkConfig& cfg);

  std::uint64_t pair_count() const override { return total_; }
  std::uint64_t scan(
      const std::function<bool(NodeId, NodeId)>& visit) const override;

 private:
  WalkGenerator gen_;
  std::uint64_t total_;
};

// Debug dump: one walk per line, space-separated internal node ids.
void write_walks(const Graph& g, const WalkConfig& cfg,
                 const std::string& path, std::uint32_t threads = 1);

}  // namespace smoothwalk
