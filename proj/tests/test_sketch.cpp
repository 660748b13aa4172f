#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "core/error.hpp"
#include "core/freq.hpp"
#include "core/graph.hpp"
#include "core/rng.hpp"
#include "core/sketch.hpp"
#include "core/walks.hpp"
#include "test_util.hpp"

using namespace smoothwalk;

namespace {

MaterializedPairs stream_of(std::vector<std::pair<NodeId, NodeId>> pairs) {
  return MaterializedPairs(std::move(pairs));
}

}  // namespace

TEST_CASE("sketch keeps everything when it fits") {
  std::vector<std::pair<NodeId, NodeId>> pairs(5, {1, 2});
  auto sketch = build_sketch(stream_of(std::move(pairs)), 4);
  CHECK(sketch.size() == 1);
  CHECK(sketch.count(1, 2) == 5);
  CHECK(sketch.decrement_total() == 0);
}

TEST_CASE("overflowing a full sketch decrements everything") {
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {2, 3}, {4, 5}};
  auto sketch = build_sketch(stream_of(std::move(pairs)), 2);
  CHECK(sketch.size() == 0);
  CHECK(sketch.decrement_total() == 1);
}

TEST_CASE("budget >= unique pairs means exact counters") {
  auto counts = zipf_counts(50, 1.2, 300.0);
  auto stream = pairs_from_counts(counts, 42);
  auto sketch = build_sketch(stream, 64);
  CHECK(sketch.decrement_total() == 0);
  auto table = FrequencyTable::count(stream);
  for (const auto& [key, count] : table.counts())
    CHECK(sketch.count(pair_center(key), pair_context(key)) == count);
}

TEST_CASE("heavy-hitter guarantee and counter error bounds") {
  // Randomized Zipf streams with varying skew; the guarantees must hold on
  // every one of them.
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const double z = 0.6 + 1.6 * rng.next_double();
    const std::uint64_t p = 200 + rng.next_below(800);
    auto counts = zipf_counts(p, z, 2000.0);
    auto stream = pairs_from_counts(counts, rng.next() | 1);
    auto table = FrequencyTable::count(stream);
    const std::uint64_t budget = 20 + rng.next_below(60);
    auto sketch = build_sketch(stream, budget);

    const double m = static_cast<double>(table.total());
    CHECK(sketch.size() <= budget);
    // Total decrements cannot exceed M / (b + 1).
    CHECK(static_cast<double>(sketch.decrement_total()) <=
          m / static_cast<double>(budget + 1));

    for (const auto& [key, truth] : table.counts()) {
      const std::uint64_t est =
          sketch.count(pair_center(key), pair_context(key));
      CHECK(est <= truth);
      CHECK(truth - est <= sketch.decrement_total());
      if (static_cast<double>(truth) > m / static_cast<double>(budget))
        CHECK(est > 0);  // heavy pairs always survive pass 1
    }
  }
}

TEST_CASE("recount pass produces exact counts for survivors") {
  auto counts = zipf_counts(1000, 1.5, 50'000.0);
  auto stream = pairs_from_counts(counts, 7);
  auto table = FrequencyTable::count(stream);

  auto sketch = build_sketch(stream, 100);
  FrequencyOracle oracle(std::move(sketch), stream);

  CHECK(oracle.total_pairs() == table.total());
  // Top pairs by true frequency are stored with exact counts.
  for (std::uint64_t rank = 0; rank < 10; ++rank) {
    auto [u, v] = synthetic_pair(rank);
    CHECK(oracle.contains(u, v));
    CHECK(oracle.exact_count(u, v) == counts[rank]);
    CHECK(oracle.frequency(u, v) == doctest::Approx(counts[rank]));
  }
  // Stored counts agree with brute force everywhere.
  for (const auto& [key, exact] : oracle.entries())
    CHECK(exact == table.counts().at(key));
}

TEST_CASE("oracle equals brute force when the budget covers all pairs") {
  Graph g = synth_scale_free(60, 2, 3);
  WalkConfig cfg;
  cfg.walk_length = 10;
  cfg.walks_per_node = 3;
  cfg.window = 3;
  cfg.seed = 5;
  WalkPairStream corpus(g, cfg);
  auto table = FrequencyTable::count(corpus);

  FrequencyOracle oracle(build_sketch(corpus, table.unique() + 10), corpus);
  CHECK(oracle.stored() == table.unique());
  CHECK(oracle.default_weight() == doctest::Approx(0.0));
  for (const auto& [key, truth] : table.counts())
    CHECK(oracle.frequency(pair_center(key), pair_context(key)) ==
          doctest::Approx(truth));
  // Unseen pairs fall back to the clamped default.
  CHECK(oracle.frequency(g.node_count() - 1, g.node_count() - 1) ==
        doctest::Approx(1.0));
}

TEST_CASE("default weight follows the residual formula") {
  // Stream: one pair 900 times plus 100 singletons; budget 50.
  std::vector<std::uint64_t> counts{900};
  for (int i = 0; i < 100; ++i) counts.push_back(1);
  auto stream = pairs_from_counts(counts, 0);

  auto sketch = build_sketch(stream, 50);
  FrequencyOracle oracle(std::move(sketch), stream);
  CHECK(oracle.total_pairs() == 1000);

  const double residual = static_cast<double>(1000 - oracle.stored_total());
  const double expected = residual / 50.0;
  auto [u, v] = synthetic_pair(5000);  // never seen
  CHECK(oracle.frequency(u, v) ==
        doctest::Approx(std::max(expected, 1.0)));
}

TEST_CASE("estimates are clamped to at least one") {
  std::vector<std::pair<NodeId, NodeId>> pairs(10, {1, 2});
  auto stream = stream_of(std::move(pairs));
  FrequencyOracle oracle(build_sketch(stream, 4), stream);
  CHECK(oracle.default_weight() == doctest::Approx(0.0));
  CHECK(oracle.frequency(9, 9) == doctest::Approx(1.0));
  CHECK(oracle.frequency(1, 2) == doctest::Approx(10.0));
}

TEST_CASE("recount detects corpus mismatch") {
  std::vector<std::pair<NodeId, NodeId>> pairs(10, {1, 2});
  auto stream = stream_of(std::move(pairs));
  auto sketch = build_sketch(stream, 4);

  std::vector<std::pair<NodeId, NodeId>> shorter(9, {1, 2});
  auto other = stream_of(std::move(shorter));
  CHECK_THROWS_AS(FrequencyOracle(std::move(sketch), other), StateError);
}

TEST_CASE("oracle round-trips through its text dump") {
  auto counts = zipf_counts(500, 1.4, 10'000.0);
  auto stream = pairs_from_counts(counts, 13);
  FrequencyOracle oracle(build_sketch(stream, 80), stream);

  test_util::TempDir dir;
  oracle.save(dir.file("oracle.txt"));
  auto loaded = FrequencyOracle::load(dir.file("oracle.txt"));

  CHECK(loaded.total_pairs() == oracle.total_pairs());
  CHECK(loaded.budget() == oracle.budget());
  CHECK(loaded.stored() == oracle.stored());
  CHECK(loaded.default_weight() == doctest::Approx(oracle.default_weight()));
  for (const auto& [key, count] : oracle.entries())
    CHECK(loaded.exact_count(pair_center(key), pair_context(key)) == count);
}

TEST_CASE("sketch budget must be positive") {
  CHECK_THROWS_AS(FrequentSketch(0), std::invalid_argument);
}
