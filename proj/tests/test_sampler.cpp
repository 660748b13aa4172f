#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unordered_map>
#include <vector>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/freq.hpp"
#include "core/graph.hpp"
#include "core/sampler.hpp"
#include "core/sketch.hpp"
#include "core/walks.hpp"

using namespace smoothwalk;

namespace {

std::vector<std::pair<NodeId, NodeId>> collect(const PairSource& stream) {
  std::vector<std::pair<NodeId, NodeId>> out;
  stream.scan([&](NodeId u, NodeId v) {
    out.emplace_back(u, v);
    return true;
  });
  return out;
}

}  // namespace

TEST_CASE("accept_probability") {
  CHECK(accept_probability(16.0, 0.5) == doctest::Approx(0.25));
  CHECK(accept_probability(123.0, 1.0) == doctest::Approx(1.0));
  CHECK(accept_probability(1.0, 0.3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(accept_probability(0.5, 0.5), std::invalid_argument);
}

TEST_CASE("m_beta") {
  const std::vector<std::uint64_t> counts{4, 1};
  auto mass = m_beta(counts, 0.5);
  CHECK(mass.m_beta == doctest::Approx(3.0));
  CHECK(mass.t_beta == 2);

  mass = m_beta(counts, 1.0);
  CHECK(mass.m_beta == doctest::Approx(5.0));
  CHECK(mass.t_beta == 1);

  const std::vector<std::uint64_t> flat(20, 1);
  for (double beta : {0.25, 0.5, 0.9}) {
    mass = m_beta(flat, beta);
    CHECK(mass.m_beta == doctest::Approx(20.0));
    CHECK(mass.t_beta == 1);
  }
}

TEST_CASE("beta = 1 reproduces the corpus in one pass") {
  Graph g = synth_scale_free(50, 2, 12);
  WalkConfig cfg;
  cfg.walk_length = 12;
  cfg.walks_per_node = 3;
  cfg.window = 3;
  cfg.seed = 4;
  WalkPairStream corpus(g, cfg);

  FrequencyOracle oracle(build_sketch(corpus, 64), corpus);

  SamplerConfig sampler;
  sampler.beta = 1.0;
  sampler.target = corpus.pair_count();
  sampler.seed = 11;
  std::vector<std::pair<NodeId, NodeId>> accepted;
  auto stats = smooth_stream(corpus, oracle, sampler, [&](NodeId u, NodeId v) {
    accepted.emplace_back(u, v);
  });

  CHECK(stats.passes == 1);
  CHECK(stats.rejected == 0);
  CHECK(accepted == collect(corpus));
}

TEST_CASE("output cardinality is exactly the target") {
  auto counts = zipf_counts(300, 1.3, 2000.0);
  auto stream = pairs_from_counts(counts, 5);
  auto table = FrequencyTable::count(stream);

  for (double beta : {0.3, 0.7, 1.0}) {
    SamplerConfig cfg;
    cfg.beta = beta;
    cfg.target = table.total();
    cfg.seed = 21;
    std::uint64_t emitted = 0;
    auto stats = smooth_stream(stream, table, cfg,
                               [&](NodeId, NodeId) { ++emitted; });
    CHECK(emitted == table.total());
    CHECK(stats.accepted == table.total());
    CHECK(stats.per_pass.size() == stats.passes);
  }
}

TEST_CASE("sampler is deterministic per seed") {
  auto counts = zipf_counts(100, 1.5, 500.0);
  auto stream = pairs_from_counts(counts, 9);
  auto table = FrequencyTable::count(stream);

  auto run = [&](std::uint64_t seed) {
    SamplerConfig cfg;
    cfg.beta = 0.5;
    cfg.target = table.total();
    cfg.seed = seed;
    std::vector<std::pair<NodeId, NodeId>> out;
    smooth_stream(stream, table, cfg,
                  [&](NodeId u, NodeId v) { out.emplace_back(u, v); });
    return out;
  };
  CHECK(run(1) == run(1));
  CHECK(run(1) != run(2));
}

TEST_CASE("per-pair acceptance matches the smoothed expectation") {
  // One pair with frequency 400 among 600 singletons: M = 1000,
  // m_beta = 620, t_beta = 2, so the heavy pair expects 2 * 20 samples.
  std::vector<std::uint64_t> counts{400};
  for (int i = 0; i < 600; ++i) counts.push_back(1);
  auto stream = pairs_from_counts(counts, 31);
  auto table = FrequencyTable::count(stream);
  const auto mass = m_beta(table, 0.5);
  CHECK(mass.t_beta == 2);

  const auto heavy = synthetic_pair(0);
  const double expected =
      static_cast<double>(mass.t_beta) * std::pow(400.0, 0.5);
  int within = 0;
  const int runs = 50;
  for (int run = 0; run < runs; ++run) {
    SamplerConfig cfg;
    cfg.beta = 0.5;
    cfg.target = table.total();
    cfg.seed = 1000 + run;
    std::uint64_t heavy_accepted = 0;
    smooth_stream(stream, table, cfg, [&](NodeId u, NodeId v) {
      if (u == heavy.first && v == heavy.second) ++heavy_accepted;
    });
    if (std::abs(static_cast<double>(heavy_accepted) - expected) <= 20.0)
      ++within;
  }
  CHECK(within >= runs - 2);
}

TEST_CASE("pass counts concentrate around t_beta") {
  auto counts = zipf_counts(2000, 1.5, 20'000.0);
  auto stream = pairs_from_counts(counts, 17);
  auto table = FrequencyTable::count(stream);
  const auto mass = m_beta(table, 0.5);

  int inside = 0;
  const int runs = 30;
  for (int run = 0; run < runs; ++run) {
    SamplerConfig cfg;
    cfg.beta = 0.5;
    cfg.target = table.total();
    cfg.seed = 500 + run;
    auto stats = smooth_stream(stream, table, cfg, [](NodeId, NodeId) {});
    if (stats.passes + 1 >= mass.t_beta && stats.passes <= mass.t_beta + 1)
      ++inside;
  }
  CHECK(inside == runs);
}

TEST_CASE("smoothed rank-frequency slope approaches beta * z") {
  const double z = 1.5, beta = 0.5;
  auto counts = zipf_counts(3000, z, 30'000.0);
  auto stream = pairs_from_counts(counts, 3);
  auto table = FrequencyTable::count(stream);

  SamplerConfig cfg;
  cfg.beta = beta;
  cfg.target = table.total();
  cfg.seed = 12;
  std::unordered_map<PairKey, std::uint64_t> sampled;
  smooth_stream(stream, table, cfg, [&](NodeId u, NodeId v) {
    ++sampled[pair_key(u, v)];
  });

  std::vector<std::uint64_t> ranked;
  ranked.reserve(sampled.size());
  for (const auto& [key, count] : sampled) ranked.push_back(count);
  std::sort(ranked.begin(), ranked.end(), std::greater<>());

  std::vector<double> log_rank, log_count;
  for (std::size_t i = 0; i < ranked.size() && ranked[i] >= 20; ++i) {
    log_rank.push_back(std::log(static_cast<double>(i + 1)));
    log_count.push_back(std::log(static_cast<double>(ranked[i])));
  }
  REQUIRE(log_rank.size() >= 100);
  const auto fit = least_squares(log_rank, log_count);
  CHECK(-fit.slope == doctest::Approx(beta * z).epsilon(0.14));
}

TEST_CASE("unsmooth_stream sharpens with an upper bound") {
  SUBCASE("frequency at the bound is always accepted") {
    std::vector<std::uint64_t> counts{64, 8};
    auto stream = pairs_from_counts(counts, 2);
    auto table = FrequencyTable::count(stream);

    SamplerConfig cfg;
    cfg.beta = 2.0;
    cfg.upper_bound = 64.0;
    cfg.target = 200;
    cfg.seed = 6;
    std::unordered_map<PairKey, std::uint64_t> per_pass_hits;
    std::uint64_t heavy = 0, light = 0;
    auto stats = unsmooth_stream(stream, table, cfg, [&](NodeId u, NodeId v) {
      if (pair_key(u, v) == pair_key(synthetic_pair(0).first,
                                     synthetic_pair(0).second))
        ++heavy;
      else
        ++light;
    });
    CHECK(stats.accepted == 200);
    // Heavy pair accepted every time it streams by: 64 per full pass.
    // Light pair acceptance probability is (8/64) = 1/8.
    const double passes = static_cast<double>(stats.passes);
    CHECK(static_cast<double>(heavy) >= 64.0 * (passes - 1));
    CHECK(static_cast<double>(light) / (8.0 * passes) ==
          doctest::Approx(0.125).epsilon(0.6));
  }
  SUBCASE("probability halves at half the bound") {
    std::vector<std::uint64_t> counts(200, 32);
    auto stream = pairs_from_counts(counts, 8);
    auto table = FrequencyTable::count(stream);
    SamplerConfig cfg;
    cfg.beta = 2.0;
    cfg.upper_bound = 64.0;
    cfg.target = 3200;  // expected per pass: 6400 * 0.5
    cfg.seed = 9;
    auto stats = unsmooth_stream(stream, table, cfg, [](NodeId, NodeId) {});
    const double rate = static_cast<double>(stats.accepted) /
                        static_cast<double>(stats.consumed);
    CHECK(rate == doctest::Approx(0.5).epsilon(0.05));
  }
  SUBCASE("upper bound violations fail fast and name the pair") {
    std::vector<std::uint64_t> counts{100};
    auto stream = pairs_from_counts(counts, 0);
    auto table = FrequencyTable::count(stream);
    SamplerConfig cfg;
    cfg.beta = 2.0;
    cfg.upper_bound = 50.0;
    cfg.target = 10;
    CHECK_THROWS_WITH_AS(
        unsmooth_stream(stream, table, cfg, [](NodeId, NodeId) {}),
        doctest::Contains("upper bound"), StateError);
  }
  SUBCASE("beta slightly above one accepts nearly everything") {
    std::vector<std::uint64_t> counts(50, 10);
    auto stream = pairs_from_counts(counts, 4);
    auto table = FrequencyTable::count(stream);
    SamplerConfig cfg;
    cfg.beta = 1.0 + 1e-9;
    cfg.upper_bound = 10.0;
    cfg.target = 500;
    auto stats = unsmooth_stream(stream, table, cfg, [](NodeId, NodeId) {});
    CHECK(stats.passes == 1);
  }
  SUBCASE("parameter validation") {
    std::vector<std::uint64_t> counts{4};
    auto stream = pairs_from_counts(counts, 0);
    auto table = FrequencyTable::count(stream);
    SamplerConfig cfg;
    cfg.beta = 0.5;
    cfg.upper_bound = 10.0;
    cfg.target = 1;
    CHECK_THROWS_AS(unsmooth_stream(stream, table, cfg, [](NodeId, NodeId) {}),
                    std::invalid_argument);
    cfg.beta = 2.0;
    cfg.upper_bound = 0.0;
    CHECK_THROWS_AS(unsmooth_stream(stream, table, cfg, [](NodeId, NodeId) {}),
                    std::invalid_argument);
  }
}

TEST_CASE("smooth_stream validates its inputs") {
  std::vector<std::uint64_t> counts{4};
  auto stream = pairs_from_counts(counts, 0);
  auto table = FrequencyTable::count(stream);
  SamplerConfig cfg;
  cfg.beta = 1.5;
  cfg.target = 1;
  CHECK_THROWS_AS(smooth_stream(stream, table, cfg, [](NodeId, NodeId) {}),
                  std::invalid_argument);

  cfg.beta = 0.5;
  cfg.target = 0;
  CHECK_THROWS_AS(smooth_stream(stream, table, cfg, [](NodeId, NodeId) {}),
                  std::invalid_argument);

  MaterializedPairs empty;
  cfg.target = 1;
  CHECK_THROWS_AS(smooth_stream(empty, table, cfg, [](NodeId, NodeId) {}),
                  std::invalid_argument);
}

TEST_CASE("sampling with a sketched oracle filters unsketched pairs harder") {
  auto counts = zipf_counts(1000, 1.5, 20'000.0);
  auto stream = pairs_from_counts(counts, 23);
  FrequencyOracle oracle(build_sketch(stream, 100), stream);
  auto table = FrequencyTable::count(stream);

  // The default weight overestimates the tail pairs, so their acceptance
  // probability drops below the exact-count sampler's.
  const auto tail = synthetic_pair(900);
  CHECK(oracle.frequency(tail.first, tail.second) >
        table.frequency(tail.first, tail.second));
}
