#include "core/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "core/error.hpp"

namespace smoothwalk {

Graph Graph::build(NodeId n, std::span<const Edge> edges) {
  if (n == 0) throw std::invalid_argument("graph has no nodes");
  Graph g;
  g.n_ = n;
  g.m_ = edges.size();
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("node id out of range");
    if (u == v) throw std::invalid_argument("self-loop in edge set");
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (NodeId u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + deg[u];
  g.adj_.resize(2 * g.m_);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adj_[cursor[u]++] = v;
    g.adj_[cursor[v]++] = u;
  }
  for (NodeId u = 0; u < n; ++u) {
    auto begin = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
    auto end = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
    std::sort(begin, end);
    if (std::adjacent_find(begin, end) != end)
      throw std::invalid_argument("duplicate edge in edge set");
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::is_connected() const {
  if (n_ == 0) return false;
  std::vector<char> seen(n_, 0);
  std::vector<NodeId> queue{0};
  seen[0] = 1;
  std::uint64_t reached = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (NodeId w : neighbors(queue[head])) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  return reached == n_;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (NodeId u = 0; u < n_; ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

LoadedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path);

  LoadedGraph result;
  std::unordered_map<std::int64_t, NodeId> to_internal;
  std::unordered_set<PairKey> seen;
  std::vector<Edge> edges;

  auto intern = [&](std::int64_t ext) {
    auto [it, inserted] =
        to_internal.emplace(ext, static_cast<NodeId>(result.external_ids.size()));
    if (inserted) result.external_ids.push_back(ext);
    return it->second;
  };

  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::int64_t a = 0, b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra))
      throw ParseError("malformed edge at " + path + ":" +
                       std::to_string(line_no) + ": '" + line + "'");
    if (a == b) {
      ++result.self_loops_dropped;
      continue;
    }
    NodeId u = intern(a);
    NodeId v = intern(b);
    PairKey key = u < v ? pair_key(u, v) : pair_key(v, u);
    if (!seen.insert(key).second) {
      ++result.duplicate_edges_dropped;
      continue;
    }
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw IoError("read failure on " + path);
  if (edges.empty()) throw ParseError("edge list is empty: " + path);

  result.graph = Graph::build(static_cast<NodeId>(result.external_ids.size()),
                              edges);
  return result;
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write edge list: " + path);
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (!out) throw IoError("write failure on " + path);
}

void save_id_map(std::span<const std::int64_t> external_ids,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write id map: " + path);
  for (std::size_t internal = 0; internal < external_ids.size(); ++internal)
    out << external_ids[internal] << ' ' << internal << '\n';
  if (!out) throw IoError("write failure on " + path);
}

std::vector<std::int64_t> load_id_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open id map: " + path);
  std::vector<std::int64_t> external;
  std::int64_t ext = 0;
  std::uint64_t internal = 0;
  while (in >> ext >> internal) {
    if (internal >= external.size()) external.resize(internal + 1);
    external[internal] = ext;
  }
  return external;
}

double clustering_coefficient(const Graph& g) {
  const NodeId n = g.node_count();
  double total = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    auto nu = g.neighbors(u);
    const std::size_t d = nu.size();
    if (d < 2) continue;
    // Each edge between two neighbors of u is found once from each side.
    std::uint64_t twice_links = 0;
    for (NodeId v : nu) {
      auto nv = g.neighbors(v);
      std::size_t i = 0, j = 0;
      while (i < nu.size() && j < nv.size()) {
        if (nu[i] < nv[j]) {
          ++i;
        } else if (nu[i] > nv[j]) {
          ++j;
        } else {
          ++twice_links;
          ++i;
          ++j;
        }
      }
    }
    total += static_cast<double>(twice_links) /
             (static_cast<double>(d) * static_cast<double>(d - 1));
  }
  return n == 0 ? 0.0 : total / n;
}

NodeId NodeDistribution::sample(Rng& rng) const {
  double r = rng.next_double();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
  if (it == cumulative.end()) --it;
  return static_cast<NodeId>(it - cumulative.begin());
}

NodeDistribution neg_sampling_distribution(const Graph& g, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must be in [0, 1]");
  const NodeId n = g.node_count();
  if (n == 0) throw std::invalid_argument("empty graph");
  NodeDistribution dist;
  dist.weights.resize(n);
  double sum = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    const double d = static_cast<double>(g.degree(u));
    // 0^0 counts as 1 so alpha = 0 yields the uniform distribution.
    dist.weights[u] = (d == 0.0 && alpha > 0.0) ? 0.0 : std::pow(d, alpha);
    sum += dist.weights[u];
  }
  if (sum <= 0.0) throw std::invalid_argument("all node weights are zero");
  dist.cumulative.resize(n);
  double acc = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    dist.weights[u] /= sum;
    acc += dist.weights[u];
    dist.cumulative[u] = acc;
  }
  dist.cumulative[n - 1] = 1.0;
  return dist;
}

namespace {

// Connectivity probe used during edge removal: with (u, v) already removed
// from adj, checks whether v is still reachable from u.
bool still_connected(NodeId u, NodeId v,
                     const std::vector<std::vector<NodeId>>& adj,
                     std::vector<char>& seen, std::vector<NodeId>& queue) {
  std::fill(seen.begin(), seen.end(), 0);
  queue.clear();
  queue.push_back(u);
  seen[u] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (NodeId w : adj[queue[head]]) {
      if (w == v) return true;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

void erase_value(std::vector<NodeId>& list, NodeId value) {
  list.erase(std::find(list.begin(), list.end(), value));
}

}  // namespace

SplitResult split_link_prediction(const Graph& g, double fraction,
                                  std::uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw std::invalid_argument("fraction must be in (0, 1)");
  if (!g.is_connected())
    throw std::invalid_argument("graph must be connected");

  const NodeId n = g.node_count();
  const auto target =
      static_cast<std::uint64_t>(fraction * static_cast<double>(g.edge_count()));

  std::vector<Edge> pool = g.edges();
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [u, v] : pool) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  SplitResult result;
  result.removed.reserve(target);
  Rng rng(mix_seed(seed, seed_tag::kSplit));
  std::vector<char> seen(n, 0);
  std::vector<NodeId> queue;
  queue.reserve(n);

  auto try_remove = [&](std::size_t index) {
    auto [u, v] = pool[index];
    erase_value(adj[u], v);
    erase_value(adj[v], u);
    if (still_connected(u, v, adj, seen, queue)) {
      result.removed.emplace_back(u, v);
      pool[index] = pool.back();
      pool.pop_back();
      return true;
    }
    adj[u].push_back(v);
    adj[v].push_back(u);
    return false;
  };

  std::uint64_t failures_since_success = 0;
  while (result.removed.size() < target) {
    if (pool.empty()) break;
    if (failures_since_success > pool.size()) {
      // Random draws keep hitting bridges; scan the pool to settle whether
      // any removable edge is left.
      bool found = false;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (try_remove(i)) {
          found = true;
          break;
        }
      }
      if (!found) break;
      failures_since_success = 0;
      continue;
    }
    if (try_remove(rng.next_below(pool.size()))) {
      failures_since_success = 0;
    } else {
      ++failures_since_success;
    }
  }

  if (result.removed.size() < target)
    throw StateError("cannot remove " + std::to_string(target) +
                     " edges without disconnecting the graph; achieved " +
                     std::to_string(result.removed.size()));

  std::vector<Edge> remaining;
  remaining.reserve(g.edge_count() - target);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : adj[u])
      if (u < v) remaining.emplace_back(u, v);
  result.residual = Graph::build(n, remaining);
  return result;
}

Graph synth_scale_free(NodeId n, NodeId m_attach, std::uint64_t seed) {
  if (m_attach < 1 || n <= m_attach)
    throw std::invalid_argument("need n > m_attach >= 1");

  Rng rng(mix_seed(seed, seed_tag::kSynth));
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - m_attach) * m_attach);
  // One entry per edge endpoint; drawing uniformly from it is drawing
  // nodes proportionally to degree.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * edges.capacity());

  std::vector<NodeId> targets;
  for (NodeId node = m_attach; node < n; ++node) {
    targets.clear();
    if (endpoints.empty()) {
      for (NodeId t = 0; t < m_attach; ++t) targets.push_back(t);
    } else {
      while (targets.size() < m_attach) {
        NodeId candidate = endpoints[rng.next_below(endpoints.size())];
        if (std::find(targets.begin(), targets.end(), candidate) ==
            targets.end())
          targets.push_back(candidate);
      }
    }
    for (NodeId t : targets) {
      edges.emplace_back(node, t);
      endpoints.push_back(node);
      endpoints.push_back(t);
    }
  }
  return Graph::build(n, edges);
}

Graph densify_neighborhoods(const Graph& g, double hub_fraction,
                            std::uint64_t extra_edges, std::uint64_t seed) {
  if (hub_fraction <= 0.0 || hub_fraction > 1.0)
    throw std::invalid_argument("hub_fraction must be in (0, 1]");
  if (!g.is_connected())
    throw std::invalid_argument("graph must be connected");
  if (extra_edges == 0) return g;

  const NodeId n = g.node_count();
  std::vector<NodeId> by_degree(n);
  for (NodeId u = 0; u < n; ++u) by_degree[u] = u;
  std::sort(by_degree.begin(), by_degree.end(), [&](NodeId a, NodeId b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return a < b;
  });
  const auto hub_count = static_cast<std::size_t>(
      std::ceil(hub_fraction * static_cast<double>(n)));
  by_degree.resize(hub_count);

  std::unordered_set<PairKey> present;
  std::vector<Edge> edges = g.edges();
  for (const auto& [u, v] : edges) present.insert(pair_key(u, v));

  Rng rng(mix_seed(seed, seed_tag::kSynth, 1));
  std::uint64_t added = 0;
  std::uint64_t attempts = 0;
  const std::uint64_t attempt_limit = 100 * extra_edges + 1000;
  while (added < extra_edges && attempts < attempt_limit) {
    ++attempts;
    NodeId hub = by_degree[rng.next_below(by_degree.size())];
    auto nb = g.neighbors(hub);
    if (nb.size() < 2) continue;
    std::size_t i = rng.next_below(nb.size());
    std::size_t j = rng.next_below(nb.size() - 1);
    if (j >= i) ++j;
    NodeId a = std::min(nb[i], nb[j]);
    NodeId b = std::max(nb[i], nb[j]);
    if (!present.insert(pair_key(a, b)).second) continue;
    edges.emplace_back(a, b);
    ++added;
  }
  if (added < extra_edges)
    throw StateError("placed only " + std::to_string(added) + " of " +
                     std::to_string(extra_edges) + " extra edges");

  Graph out = Graph::build(n, edges);
  if (!(clustering_coefficient(out) > clustering_coefficient(g)))
    throw StateError("densification did not raise the clustering coefficient");
  return out;
}

}  // namespace smoothwalk
