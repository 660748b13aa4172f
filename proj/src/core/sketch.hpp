#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "core/freq.hpp"
#include "core/stream.hpp"
#include "core/types.hpp"

namespace smoothwalk {

// Frequent (Misra-Gries) heavy-hitter sketch over pair streams. Keeps at
// most `budget` pairs; counters underestimate true frequencies by at most
// the number of decrement events. Every pair occurring more than
// M / budget times in a stream of M pairs is guaranteed to survive it.
class FrequentSketch {
 public:
  explicit FrequentSketch(std::uint64_t budget);

  void offer(NodeId u, NodeId v);

  std::uint64_t budget() const { return budget_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t offered() const { return offered_; }
  std::uint64_t decrement_total() const { return decrement_total_; }

  std::uint64_t count(NodeId u, NodeId v) const {
    auto it = entries_.find(pair_key(u, v));
    return it == entries_.end() ? 0 : it->second;
  }

  const std::unordered_map<PairKey, std::uint64_t>& entries() const {
    return entries_;
  }

 private:
  std::uint64_t budget_;
  std::uint64_t offered_ = 0;
  std::uint64_t decrement_total_ = 0;
  std::unordered_map<PairKey, std::uint64_t> entries_;
};

// Pass 1: feed the whole corpus through the sketch.
FrequentSketch build_sketch(const PairSource& corpus, std::uint64_t budget);

// Pass 2 result: exact counts for pairs that survived the sketch, a fixed
// residual default for everything else.
class FrequencyOracle final : public FrequencySource {
 public:
  // Recounts the surviving pairs over the identical corpus. Throws
  // StateError if the corpus length differs from what the sketch saw.
  FrequencyOracle(FrequentSketch sketch, const PairSource& corpus);

  // Exact count for stored pairs, max(default_weight, 1) otherwise.
  double frequency(NodeId u, NodeId v) const override;

  bool contains(NodeId u, NodeId v) const {
    return exact_.find(pair_key(u, v)) != exact_.end();
  }
  std::uint64_t exact_count(NodeId u, NodeId v) const {
    auto it = exact_.find(pair_key(u, v));
    return it == exact_.end() ? 0 : it->second;
  }

  std::uint64_t total_pairs() const { return total_; }   // M
  std::uint64_t budget() const { return budget_; }
  std::size_t stored() const { return exact_.size(); }
  std::uint64_t stored_total() const { return stored_total_; }
  double default_weight() const { return default_weight_; }
  std::uint64_t max_count() const { return max_count_; }

  const std::unordered_map<PairKey, std::uint64_t>& entries() const {
    return exact_;
  }

  // Text dump: header "M budget default_weight", then "u v count" lines.
  void save(const std::string& path) const;
  static FrequencyOracle load(const std::string& path);

 private:
  FrequencyOracle() = default;
  void finalize();

  std::unordered_map<PairKey, std::uint64_t> exact_;
  std::uint64_t total_ = 0;
  std::uint64_t budget_ = 0;
  std::uint64_t stored_total_ = 0;
  std::uint64_t max_count_ = 0;
  double default_weight_ = 0.0;
};

}  // namespace smoothwalk
