#include "core/freq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace smoothwalk {

FrequencyTable FrequencyTable::count(const PairSource& corpus) {
  FrequencyTable table;
  corpus.scan([&](NodeId u, NodeId v) {
    ++table.counts_[pair_key(u, v)];
    return true;
  });
  table.finalize();
  return table;
}

FrequencyTable FrequencyTable::from_counts(
    std::span<const std::uint64_t> counts) {
  FrequencyTable table;
  table.counts_.reserve(counts.size());
  for (std::uint64_t rank = 0; rank < counts.size(); ++rank) {
    if (counts[rank] == 0)
      throw std::invalid_argument("counts must be >= 1");
    auto [u, v] = synthetic_pair(rank);
    table.counts_[pair_key(u, v)] = counts[rank];
  }
  table.finalize();
  return table;
}

void FrequencyTable::finalize() {
  sorted_.clear();
  sorted_.reserve(counts_.size());
  total_ = 0;
  for (const auto& [key, count] : counts_) {
    sorted_.push_back(count);
    total_ += count;
  }
  std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
}

std::vector<std::uint64_t> zipf_counts(std::uint64_t unique_pairs, double z,
                                       double scale) {
  if (unique_pairs == 0) throw std::invalid_argument("need at least one pair");
  if (z < 0.0 || scale < 1.0)
    throw std::invalid_argument("need z >= 0 and scale >= 1");
  std::vector<std::uint64_t> counts(unique_pairs);
  for (std::uint64_t i = 0; i < unique_pairs; ++i) {
    const double f = scale / std::pow(static_cast<double>(i + 1), z);
    counts[i] = std::max<std::uint64_t>(1, std::llround(f));
  }
  return counts;
}

MaterializedPairs pairs_from_counts(std::span<const std::uint64_t> counts,
                                    std::uint64_t shuffle_seed) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  pairs.reserve(total);
  for (std::uint64_t rank = 0; rank < counts.size(); ++rank) {
    const auto p = synthetic_pair(rank);
    for (std::uint64_t c = 0; c < counts[rank]; ++c) pairs.push_back(p);
  }
  if (shuffle_seed != 0) {
    Rng rng(mix_seed(shuffle_seed, 0x53485546ull));
    for (std::size_t i = pairs.size(); i > 1; --i)
      std::swap(pairs[i - 1], pairs[rng.next_below(i)]);
  }
  return MaterializedPairs(std::move(pairs));
}

}  // namespace smoothwalk
