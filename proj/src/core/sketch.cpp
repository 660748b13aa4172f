#include "core/sketch.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "core/error.hpp"

namespace smoothwalk {

FrequentSketch::FrequentSketch(std::uint64_t budget) : budget_(budget) {
  if (budget < 1) throw std::invalid_argument("sketch budget must be >= 1");
  entries_.reserve(budget + 1);
}

void FrequentSketch::offer(NodeId u, NodeId v) {
  ++offered_;
  const PairKey key = pair_key(u, v);
  if (auto it = entries_.find(key); it != entries_.end()) {
    ++it->second;
    return;
  }
  if (entries_.size() < budget_) {
    entries_.emplace(key, 1);
    return;
  }
  // Full and the pair is new: decrement everything instead of inserting.
  // Each decrement is paid for by the increment that produced it, so the
  // amortized cost per update stays constant.
  ++decrement_total_;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (--it->second == 0) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

FrequentSketch build_sketch(const PairSource& corpus, std::uint64_t budget) {
  FrequentSketch sketch(budget);
  corpus.scan([&](NodeId u, NodeId v) {
    sketch.offer(u, v);
    return true;
  });
  return sketch;
}

FrequencyOracle::FrequencyOracle(FrequentSketch sketch,
                                 const PairSource& corpus) {
  total_ = sketch.offered();
  budget_ = sketch.budget();
  exact_.reserve(sketch.size());
  for (const auto& entry : sketch.entries()) exact_.emplace(entry.first, 0);

  std::uint64_t seen = 0;
  corpus.scan([&](NodeId u, NodeId v) {
    ++seen;
    if (auto it = exact_.find(pair_key(u, v)); it != exact_.end())
      ++it->second;
    return true;
  });
  if (seen != total_)
    throw StateError("corpus mismatch between passes: pass 1 saw " +
                     std::to_string(total_) + " pairs, pass 2 saw " +
                     std::to_string(seen));
  finalize();
}

void FrequencyOracle::finalize() {
  stored_total_ = 0;
  max_count_ = 0;
  for (const auto& [key, count] : exact_) {
    stored_total_ += count;
    max_count_ = std::max(max_count_, count);
  }
  default_weight_ = static_cast<double>(total_ - stored_total_) /
                    static_cast<double>(budget_);
}

double FrequencyOracle::frequency(NodeId u, NodeId v) const {
  if (auto it = exact_.find(pair_key(u, v)); it != exact_.end())
    return static_cast<double>(it->second);
  return default_weight_ > 1.0 ? default_weight_ : 1.0;
}

void FrequencyOracle::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write oracle: " + path);
  char header[96];
  std::snprintf(header, sizeof(header), "%" PRIu64 " %" PRIu64 " %.17g\n",
                total_, budget_, default_weight_);
  out << header;
  for (const auto& [key, count] : exact_)
    out << pair_center(key) << ' ' << pair_context(key) << ' ' << count
        << '\n';
  if (!out) throw IoError("write failure on " + path);
}

FrequencyOracle FrequencyOracle::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open oracle: " + path);
  FrequencyOracle oracle;
  std::string header;
  if (!std::getline(in, header))
    throw ParseError("oracle file is empty: " + path);
  {
    std::istringstream fields(header);
    if (!(fields >> oracle.total_ >> oracle.budget_ >> oracle.default_weight_))
      throw ParseError("bad oracle header in " + path);
  }
  NodeId u = 0, v = 0;
  std::uint64_t count = 0;
  while (in >> u >> v >> count) oracle.exact_[pair_key(u, v)] = count;
  if (oracle.exact_.size() > oracle.budget_)
    throw ParseError("oracle stores more pairs than its budget: " + path);
  oracle.finalize();
  return oracle;
}

}  // namespace smoothwalk
