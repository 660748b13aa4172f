#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace smoothwalk {

using Edge = std::pair<NodeId, NodeId>;

// Undirected simple graph in CSR form with sorted neighbor lists.
// Immutable after construction; safe to share across threads.
class Graph {
 public:
  Graph() = default;

  // edges must be free of self-loops and duplicates (in either direction)
  // and reference node ids < n. Throws std::invalid_argument otherwise.
  static Graph build(NodeId n, std::span<const Edge> edges);

  NodeId node_count() const { return n_; }
  std::uint64_t edge_count() const { return m_; }

  std::uint32_t degree(NodeId u) const {
    return static_cast<std::uint32_t>(offsets_[u + 1] - offsets_[u]);
  }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const;
  bool is_connected() const;

  // All edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

 private:
  NodeId n_ = 0;
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> adj_;
};

struct LoadedGraph {
  Graph graph;
  std::vector<std::int64_t> external_ids;  // internal id -> external id
  std::uint64_t self_loops_dropped = 0;
  std::uint64_t duplicate_edges_dropped = 0;
};

// Text edge list: two whitespace-separated integer ids per line, lines
// starting with '#' ignored. External ids are remapped densely to 0..n-1
// in order of first appearance.
LoadedGraph load_edge_list(const std::string& path);

// Writes internal ids, one edge per line with u < v, sorted. Together with
// the id-map sidecar this round-trips exactly.
void save_edge_list(const Graph& g, const std::string& path);

// Sidecar format: "external_id internal_id" per line.
void save_id_map(std::span<const std::int64_t> external_ids,
                 const std::string& path);
std::vector<std::int64_t> load_id_map(const std::string& path);

// Average local clustering coefficient; nodes with degree < 2 contribute 0.
double clustering_coefficient(const Graph& g);

struct NodeDistribution {
  std::vector<double> weights;     // normalized, sum 1
  std::vector<double> cumulative;  // nondecreasing, back() == 1

  NodeId sample(Rng& rng) const;
};

// weight(v) = d(v)^alpha / sum_u d(u)^alpha
NodeDistribution neg_sampling_distribution(const Graph& g, double alpha);

struct SplitResult {
  Graph residual;
  std::vector<Edge> removed;
};

// Removes floor(fraction * m) edges uniformly at random, skipping any edge
// whose removal would disconnect the graph. Deterministic per seed.
SplitResult split_link_prediction(const Graph& g, double fraction,
                                  std::uint64_t seed);

// Preferential attachment: starts from m_attach isolated nodes, each new
// node attaches to m_attach existing nodes with probability proportional
// to degree. Result is connected with (n - m_attach) * m_attach edges.
Graph synth_scale_free(NodeId n, NodeId m_attach, std::uint64_t seed);

// Adds extra_edges edges, each between two distinct neighbors of a hub
// drawn uniformly from the top ceil(hub_fraction * n) nodes by degree.
Graph densify_neighborhoods(const Graph& g, double hub_fraction,
                            std::uint64_t extra_edges, std::uint64_t seed);

}  // namespace smoothwalk
