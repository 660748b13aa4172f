#include "core/walks.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <stdexcept>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace smoothwalk {

std::uint64_t pairs_per_sequence(std::uint32_t walk_length,
                                 std::uint32_t window) {
  if (walk_length < 2) throw std::invalid_argument("walk_length must be >= 2");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const std::uint64_t l = walk_length;
  const std::uint64_t t = window;
  if (l <= t + 1) return l * (l - 1);
  return 2 * t * l - t * (t + 1);
}

std::uint64_t total_pairs(NodeId n, const WalkConfig& cfg) {
  if (n == 0) throw std::invalid_argument("empty graph");
  if (cfg.walks_per_node < 1)
    throw std::invalid_argument("walks_per_node must be >= 1");
  const std::uint64_t per_walk = pairs_per_sequence(cfg.walk_length, cfg.window);
  std::uint64_t walks = 0, total = 0;
  if (__builtin_mul_overflow(static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(cfg.walks_per_node),
                             &walks) ||
      __builtin_mul_overflow(walks, per_walk, &total))
    throw std::overflow_error("total pair count overflows 64 bits");
  return total;
}

std::vector<std::pair<NodeId, NodeId>> skipgram_pairs(
    std::span<const NodeId> walk, std::uint32_t window) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(pairs_per_sequence(static_cast<std::uint32_t>(walk.size()),
                                 window));
  for_each_skipgram_pair(walk, window,
                         [&](NodeId u, NodeId v) { out.emplace_back(u, v); });
  return out;
}

WalkGenerator::WalkGenerator(const Graph& g, const WalkConfig& cfg)
    : g_(&g), cfg_(cfg) {
  if (cfg.walk_length < 2)
    throw std::invalid_argument("walk_length must be >= 2");
  if (cfg.bias == WalkBias::kNode2Vec && (cfg.p <= 0.0 || cfg.q <= 0.0))
    throw std::invalid_argument("node2vec p and q must be positive");
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (g.degree(u) == 0)
      throw std::invalid_argument("node " + std::to_string(u) +
                                  " has no neighbors");
  biased_ =
      cfg.bias == WalkBias::kNode2Vec && !(cfg.p == 1.0 && cfg.q == 1.0);
}

std::span<const double> WalkGenerator::transition_row(NodeId prev,
                                                      NodeId current) const {
  const PairKey key = pair_key(prev, current);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  auto nb = g_->neighbors(current);
  std::vector<double>* row;
  std::vector<double> local;
  if (memo_.size() < cfg_.memo_budget) {
    row = &memo_[key];
  } else {
    scratch_.clear();
    row = &scratch_;
  }
  row->resize(nb.size());
  auto prev_nb = g_->neighbors(prev);
  double acc = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    double w;
    if (nb[i] == prev) {
      w = 1.0 / cfg_.p;
    } else if (std::binary_search(prev_nb.begin(), prev_nb.end(), nb[i])) {
      w = 1.0;
    } else {
      w = 1.0 / cfg_.q;
    }
    acc += w;
    (*row)[i] = acc;
  }
  return *row;
}

void WalkGenerator::generate(NodeId start, std::uint32_t rep,
                             std::vector<NodeId>& out) const {
  if (start >= g_->node_count())
    throw std::invalid_argument("start node out of range");
  Rng rng(mix_seed(cfg_.seed, seed_tag::kWalk,
                   (static_cast<std::uint64_t>(start) << 32) | rep));
  out.clear();
  out.reserve(cfg_.walk_length);
  out.push_back(start);
  NodeId prev = start;
  for (std::uint32_t step = 1; step < cfg_.walk_length; ++step) {
    const NodeId current = out.back();
    auto nb = g_->neighbors(current);
    std::size_t idx;
    if (!biased_ || step == 1) {
      idx = rng.next_below(nb.size());
    } else {
      auto cum = transition_row(prev, current);
      const double r = rng.next_double() * cum.back();
      idx = static_cast<std::size_t>(
          std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
      if (idx >= cum.size()) idx = cum.size() - 1;
    }
    prev = current;
    out.push_back(nb[idx]);
  }
}

WalkPairStream::WalkPairStream(const Graph& g, const WalkConfig& cfg)
    : gen_(g, cfg), total_(total_pairs(g.node_count(), cfg)) {}

std::uint64_t WalkPairStream::scan(
    const std::function<bool(NodeId, NodeId)>& visit) const {
  const Graph& g = gen_.graph();
  const WalkConfig& cfg = gen_.config();
  std::uint64_t visited = 0;
  std::vector<NodeId> walk;
  for (NodeId node = 0; node < g.node_count(); ++node) {
    for (std::uint32_t rep = 0; rep < cfg.walks_per_node; ++rep) {
      gen_.generate(node, rep, walk);
      const std::size_t len = walk.size();
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t lo = i > cfg.window ? i - cfg.window : 0;
        const std::size_t hi = std::min(len - 1, i + cfg.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          ++visited;
          if (!visit(walk[i], walk[j])) return visited;
        }
      }
    }
  }
  return visited;
}

void write_walks(const Graph& g, const WalkConfig& cfg,
                 const std::string& path, std::uint32_t threads) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write walks: " + path);

  const NodeId n = g.node_count();
  if (threads <= 1) {
    WalkGenerator gen(g, cfg);
    std::vector<NodeId> walk;
    for (NodeId node = 0; node < n; ++node) {
      for (std::uint32_t rep = 0; rep < cfg.walks_per_node; ++rep) {
        gen.generate(node, rep, walk);
        for (std::size_t i = 0; i < walk.size(); ++i) {
          if (i) out << ' ';
          out << walk[i];
        }
        out << '\n';
      }
    }
  } else {
    // Chunks are rendered in parallel and written in order; output is
    // identical to the single-threaded dump.
    const NodeId chunk = std::max<NodeId>(1, (n + threads - 1) / threads);
    std::vector<std::future<std::string>> parts;
    for (NodeId begin = 0; begin < n; begin += chunk) {
      const NodeId end = std::min<NodeId>(n, begin + chunk);
      parts.push_back(std::async(std::launch::async, [&, begin, end] {
        WalkGenerator gen(g, cfg);
        std::vector<NodeId> walk;
        std::string buffer;
        for (NodeId node = begin; node < end; ++node) {
          for (std::uint32_t rep = 0; rep < cfg.walks_per_node; ++rep) {
            gen.generate(node, rep, walk);
            for (std::size_t i = 0; i < walk.size(); ++i) {
              if (i) buffer += ' ';
              buffer += std::to_string(walk[i]);
            }
            buffer += '\n';
          }
        }
        return buffer;
      }));
    }
    for (auto& part : parts) out << part.get();
  }
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace smoothwalk
