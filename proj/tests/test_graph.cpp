#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/graph.hpp"
#include "test_util.hpp"

using namespace smoothwalk;

namespace {

Graph triangle() {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 0}};
  return Graph::build(3, edges);
}

Graph path3() {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  return Graph::build(3, edges);
}

Graph clique(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::build(n, edges);
}

Graph star(NodeId leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph::build(leaves + 1, edges);
}

std::set<std::pair<NodeId, NodeId>> edge_set(const Graph& g) {
  auto edges = g.edges();
  return {edges.begin(), edges.end()};
}

}  // namespace

TEST_CASE("load_edge_list parses a triangle") {
  test_util::TempDir dir;
  auto path = test_util::write_file(dir, "tri.txt", "0 1\n1 2\n2 0\n");
  auto loaded = load_edge_list(path);
  CHECK(loaded.graph.node_count() == 3);
  CHECK(loaded.graph.edge_count() == 3);
  CHECK(loaded.self_loops_dropped == 0);
  CHECK(loaded.duplicate_edges_dropped == 0);
}

TEST_CASE("load_edge_list drops duplicates and self-loops") {
  test_util::TempDir dir;
  auto path = test_util::write_file(dir, "g.txt", "0 1\n1 0\n5 5\n");
  auto loaded = load_edge_list(path);
  CHECK(loaded.graph.node_count() == 2);
  CHECK(loaded.graph.edge_count() == 1);
  CHECK(loaded.duplicate_edges_dropped == 1);
  CHECK(loaded.self_loops_dropped == 1);
}

TEST_CASE("load_edge_list remaps external ids densely") {
  test_util::TempDir dir;
  auto path = test_util::write_file(dir, "g.txt", "# comment\n100 7\n7 42\n");
  auto loaded = load_edge_list(path);
  CHECK(loaded.graph.node_count() == 3);
  CHECK(loaded.external_ids == std::vector<std::int64_t>{100, 7, 42});
}

TEST_CASE("load_edge_list error paths") {
  test_util::TempDir dir;
  CHECK_THROWS_AS(load_edge_list(dir.file("missing.txt")), IoError);

  auto malformed = test_util::write_file(dir, "bad.txt", "0 1\n1 2 3\n");
  CHECK_THROWS_WITH_AS(load_edge_list(malformed),
                       doctest::Contains(":2"), ParseError);

  auto empty = test_util::write_file(dir, "empty.txt", "# nothing\n");
  CHECK_THROWS_AS(load_edge_list(empty), ParseError);
}

TEST_CASE("edge list round-trips through save and load") {
  Graph g = synth_scale_free(60, 2, 9);
  test_util::TempDir dir;
  save_edge_list(g, dir.file("g.txt"));
  auto reloaded = load_edge_list(dir.file("g.txt"));
  CHECK(edge_set(g) == edge_set(reloaded.graph));
}

TEST_CASE("id map round-trips") {
  test_util::TempDir dir;
  std::vector<std::int64_t> ids{100, 7, 42};
  save_id_map(ids, dir.file("map.txt"));
  CHECK(load_id_map(dir.file("map.txt")) == ids);
}

TEST_CASE("clustering coefficient on small graphs") {
  CHECK(clustering_coefficient(triangle()) == doctest::Approx(1.0));
  CHECK(clustering_coefficient(path3()) == doctest::Approx(0.0));
  for (NodeId n = 3; n <= 6; ++n)
    CHECK(clustering_coefficient(clique(n)) == doctest::Approx(1.0));
}

TEST_CASE("neg_sampling_distribution normalizes degree powers") {
  // Degrees: 1, 3, 2, 2.
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {1, 3}, {2, 3}};
  Graph g = Graph::build(4, edges);

  SUBCASE("alpha = 1 is linear in degree") {
    auto dist = neg_sampling_distribution(g, 1.0);
    CHECK(dist.weights[0] == doctest::Approx(1.0 / 8));
    CHECK(dist.weights[1] == doctest::Approx(3.0 / 8));
    CHECK(dist.weights[2] == doctest::Approx(2.0 / 8));
  }
  SUBCASE("alpha = 0 is uniform") {
    auto dist = neg_sampling_distribution(g, 0.0);
    for (double w : dist.weights) CHECK(w == doctest::Approx(0.25));
  }
  SUBCASE("alpha = 0.75 follows the hand computation 16^0.75 = 8") {
    Graph s = star(16);
    auto dist = neg_sampling_distribution(s, 0.75);
    CHECK(dist.weights[0] / dist.weights[1] == doctest::Approx(8.0));
  }
  SUBCASE("weights sum to one") {
    for (double alpha : {0.0, 0.5, 0.75, 1.0}) {
      auto dist = neg_sampling_distribution(g, alpha);
      double sum = 0.0;
      for (double w : dist.weights) sum += w;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(dist.cumulative.back() == doctest::Approx(1.0));
      CHECK(std::is_sorted(dist.cumulative.begin(), dist.cumulative.end()));
    }
  }
}

TEST_CASE("split_link_prediction removes one triangle edge") {
  auto split = split_link_prediction(triangle(), 0.34, 7);
  CHECK(split.removed.size() == 1);
  CHECK(split.residual.edge_count() == 2);
  CHECK(split.residual.is_connected());
}

TEST_CASE("split_link_prediction fails on trees") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  Graph tree = Graph::build(5, edges);
  CHECK_THROWS_WITH_AS(split_link_prediction(tree, 0.5, 3),
                       doctest::Contains("achieved 0"), StateError);
}

TEST_CASE("split_link_prediction on a scale-free graph") {
  Graph g = synth_scale_free(2000, 3, 123);
  auto split = split_link_prediction(g, 0.2, 99);

  const auto target = static_cast<std::uint64_t>(0.2 * g.edge_count());
  CHECK(split.removed.size() == target);
  CHECK(split.residual.is_connected());
  CHECK(split.residual.edge_count() + split.removed.size() == g.edge_count());

  auto original = edge_set(g);
  auto residual = edge_set(split.residual);
  for (const auto& e : residual) CHECK(original.count(e) == 1);
  for (auto [u, v] : split.removed) {
    if (u > v) std::swap(u, v);
    CHECK(original.count({u, v}) == 1);
    CHECK(residual.count({u, v}) == 0);
  }
  CHECK(residual.size() + split.removed.size() == original.size());

  SUBCASE("deterministic per seed") {
    auto again = split_link_prediction(g, 0.2, 99);
    CHECK(again.removed == split.removed);
  }
}

TEST_CASE("synth_scale_free shapes") {
  SUBCASE("m_attach = 1 gives a tree") {
    Graph g = synth_scale_free(5, 1, 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.is_connected());
  }
  SUBCASE("edge count by construction") {
    Graph g = synth_scale_free(2000, 3, 11);
    CHECK(g.edge_count() == 5991);
    CHECK(g.is_connected());
  }
  SUBCASE("degree distribution is heavy tailed") {
    Graph g = synth_scale_free(2000, 3, 11);
    // log-log fit of the degree CCDF.
    std::vector<std::uint32_t> degrees(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) degrees[u] = g.degree(u);
    std::sort(degrees.begin(), degrees.end());
    std::vector<double> log_k, log_ccdf;
    const double n = static_cast<double>(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      if (i > 0 && degrees[i] == degrees[i - 1]) continue;
      log_k.push_back(std::log(static_cast<double>(degrees[i])));
      log_ccdf.push_back(std::log((n - static_cast<double>(i)) / n));
    }
    const auto fit = least_squares(log_k, log_ccdf);
    CHECK(fit.slope < -1.5);
  }
  SUBCASE("invalid sizes") {
    CHECK_THROWS_AS(synth_scale_free(3, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(synth_scale_free(10, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("densify_neighborhoods") {
  SUBCASE("one extra edge closes a triangle in a star") {
    Graph s = star(4);
    CHECK(clustering_coefficient(s) == doctest::Approx(0.0));
    Graph out = densify_neighborhoods(s, 0.2, 1, 5);
    CHECK(out.edge_count() == s.edge_count() + 1);
    CHECK(clustering_coefficient(out) > 0.0);
  }
  SUBCASE("zero extra edges is the identity") {
    Graph g = synth_scale_free(50, 2, 3);
    Graph out = densify_neighborhoods(g, 0.5, 0, 5);
    CHECK(edge_set(out) == edge_set(g));
  }
  SUBCASE("clustering rises on a scale-free base") {
    Graph g = synth_scale_free(500, 3, 21);
    const double before = clustering_coefficient(g);
    Graph out = densify_neighborhoods(g, 0.3, 800, 21);
    CHECK(out.edge_count() == g.edge_count() + 800);
    CHECK(clustering_coefficient(out) > before);
  }
}

TEST_CASE("graph build validation") {
  const std::vector<Edge> self_loop{{0, 0}};
  CHECK_THROWS_AS(Graph::build(1, self_loop), std::invalid_argument);
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(Graph::build(2, dup), std::invalid_argument);
  const std::vector<Edge> range{{0, 5}};
  CHECK_THROWS_AS(Graph::build(2, range), std::invalid_argument);
}
