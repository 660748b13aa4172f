#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "core/stream.hpp"
#include "core/types.hpp"

namespace smoothwalk {

// Anything that can answer "how often does this pair occur in the corpus".
// Implementations: FrequencyTable (exact) and FrequencyOracle (sketched).
class FrequencySource {
 public:
  virtual ~FrequencySource() = default;
  virtual double frequency(NodeId u, NodeId v) const = 0;
};

// Exact pair-frequency table built by brute-force counting.
class FrequencyTable final : public FrequencySource {
 public:
  FrequencyTable() = default;

  static FrequencyTable count(const PairSource& corpus);

  // Synthetic table from a count vector; pair keys are fabricated from the
  // rank. Counts must be >= 1.
  static FrequencyTable from_counts(std::span<const std::uint64_t> counts);

  double frequency(NodeId u, NodeId v) const override {
    auto it = counts_.find(pair_key(u, v));
    return it == counts_.end() ? 0.0 : static_cast<double>(it->second);
  }

  std::uint64_t total() const { return total_; }           // M
  std::uint64_t unique() const { return counts_.size(); }  // P

  // Descending.
  std::span<const std::uint64_t> sorted_counts() const { return sorted_; }

  const std::unordered_map<PairKey, std::uint64_t>& counts() const {
    return counts_;
  }

 private:
  void finalize();

  std::unordered_map<PairKey, std::uint64_t> counts_;
  std::vector<std::uint64_t> sorted_;
  std::uint64_t total_ = 0;
};

// f_i = max(1, round(scale / i^z)) for ranks i = 1..unique_pairs.
std::vector<std::uint64_t> zipf_counts(std::uint64_t unique_pairs, double z,
                                       double scale);

// Expands a count vector into the corresponding pair multiset; rank i gets
// the same fabricated pair key as FrequencyTable::from_counts. A nonzero
// shuffle_seed permutes the stream order.
MaterializedPairs pairs_from_counts(std::span<const std::uint64_t> counts,
                                    std::uint64_t shuffle_seed = 0);

// Fabricated pair for synthetic rank i (0-based).
inline std::pair<NodeId, NodeId> synthetic_pair(std::uint64_t rank) {
  return {static_cast<NodeId>(rank >> 16),
          static_cast<NodeId>(rank & 0xffffu)};
}

}  // namespace smoothwalk
