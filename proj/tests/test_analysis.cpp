#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/analysis.hpp"
#include "core/freq.hpp"
#include "core/pipeline.hpp"
#include "core/graph.hpp"
#include "core/walks.hpp"
#include "test_util.hpp"

using namespace smoothwalk;

TEST_CASE("top_mass_fraction") {
  SUBCASE("uniform counts yield k percent (rounded up)") {
    std::vector<std::uint64_t> counts(200, 5);
    auto table = FrequencyTable::from_counts(counts);
    const std::vector<double> percents{1, 2, 5, 10, 50, 100};
    auto fractions = top_mass_fraction(table, percents);
    for (std::size_t i = 0; i < percents.size(); ++i) {
      const double expected =
          std::ceil(percents[i] / 100.0 * 200.0) / 200.0;
      CHECK(fractions[i] == doctest::Approx(expected));
    }
  }
  SUBCASE("matches analytic partial sums on a Zipf table") {
    auto counts = zipf_counts(10'000, 1.5, 1e6);
    auto table = FrequencyTable::from_counts(counts);
    const std::vector<double> percents{1, 5, 10};
    auto fractions = top_mass_fraction(table, percents);
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    for (std::size_t i = 0; i < percents.size(); ++i) {
      const auto take = static_cast<std::size_t>(
          std::ceil(percents[i] / 100.0 * 10'000));
      double mass = 0.0;
      for (std::size_t r = 0; r < take; ++r)
        mass += static_cast<double>(counts[r]);
      CHECK(fractions[i] == doctest::Approx(mass / total).epsilon(0.01));
    }
  }
  SUBCASE("monotone and reaching one") {
    auto counts = zipf_counts(500, 1.2, 1e4);
    auto table = FrequencyTable::from_counts(counts);
    std::vector<double> percents;
    for (int k = 1; k <= 100; ++k) percents.push_back(k);
    auto fractions = top_mass_fraction(table, percents);
    CHECK(std::is_sorted(fractions.begin(), fractions.end()));
    CHECK(fractions.back() == doctest::Approx(1.0));
  }
}

TEST_CASE("fit_zipf") {
  SUBCASE("floor(1000 / i) has exponent 1") {
    std::vector<std::uint64_t> counts;
    for (int i = 1; i <= 100; ++i)
      counts.push_back(static_cast<std::uint64_t>(1000 / i));
    auto table = FrequencyTable::from_counts(counts);
    CHECK(fit_zipf(table) == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("equal counts give zero") {
    std::vector<std::uint64_t> counts(50, 7);
    auto table = FrequencyTable::from_counts(counts);
    CHECK(fit_zipf(table) == doctest::Approx(0.0));
  }
  SUBCASE("exact power law with z = 1.5") {
    auto counts = zipf_counts(1000, 1.5, 1e6);
    auto table = FrequencyTable::from_counts(counts);
    CHECK(fit_zipf(table) == doctest::Approx(1.5).epsilon(0.05 / 1.5));
  }
  SUBCASE("needs at least ten pairs") {
    std::vector<std::uint64_t> counts(5, 3);
    auto table = FrequencyTable::from_counts(counts);
    CHECK_THROWS_AS(fit_zipf(table), std::invalid_argument);
  }
}

TEST_CASE("transition_rank_empirical") {
  SUBCASE("beta = 1 never transitions") {
    auto counts = zipf_counts(100, 1.5, 1000.0);
    auto table = FrequencyTable::from_counts(counts);
    CHECK(!transition_rank_empirical(table, 1.0).has_value());
  }
  SUBCASE("counts {4, 1} at beta = 0.5 transition at rank 2") {
    // t_beta = 2; rank 1: 2 * 2 = 4 is a tie, not strict; rank 2: 2 > 1.
    std::vector<std::uint64_t> counts{4, 1};
    auto table = FrequencyTable::from_counts(counts);
    auto rank = transition_rank_empirical(table, 0.5);
    REQUIRE(rank.has_value());
    CHECK(*rank == 2);
  }
  SUBCASE("matches the predicted exponent on Zipf tables") {
    // j grows like P^((1 - beta z) / (z - beta z)) = P^(1/3) here.
    std::vector<double> log_p, log_j;
    for (std::uint64_t p : {1000ull, 10'000ull, 100'000ull}) {
      auto counts =
          zipf_counts(p, 1.5, std::pow(static_cast<double>(p), 1.5));
      auto table = FrequencyTable::from_counts(counts);
      auto rank = transition_rank_empirical(table, 0.5);
      REQUIRE(rank.has_value());
      const double expected = std::pow(static_cast<double>(p), 1.0 / 3.0);
      CHECK(static_cast<double>(*rank) / expected > 0.5);
      CHECK(static_cast<double>(*rank) / expected < 2.0);
      log_p.push_back(std::log(static_cast<double>(p)));
      log_j.push_back(std::log(static_cast<double>(*rank)));
    }
    const auto fit = least_squares(log_p, log_j);
    CHECK(fit.slope == doctest::Approx(1.0 / 3.0).epsilon(0.3));
  }
}

TEST_CASE("transition_rank_predicted regimes") {
  auto constant = transition_rank_predicted(1.5, 0.9, 100'000);
  CHECK(constant.regime == TransitionRegime::kConstant);
  CHECK(!constant.rank.has_value());

  auto sublinear = transition_rank_predicted(1.5, 0.5, 100'000);
  CHECK(sublinear.regime == TransitionRegime::kSublinear);
  REQUIRE(sublinear.rank.has_value());
  CHECK(*sublinear.rank ==
        doctest::Approx(std::pow(100'000.0, 1.0 / 3.0)));

  auto linear = transition_rank_predicted(0.8, 0.5, 100'000);
  CHECK(linear.regime == TransitionRegime::kLinear);

  CHECK(transition_rank_predicted(1.0, 0.5, 100).regime ==
        TransitionRegime::kBoundary);
  CHECK(transition_rank_predicted(2.0, 0.5, 100).regime ==
        TransitionRegime::kBoundary);
}

TEST_CASE("binomial significance") {
  SUBCASE("pure positives are significant") {
    // P(X >= 100 | 100, 2/3) = (2/3)^100
    const double p = binomial_tail_geq(100, 100, 2.0 / 3.0);
    CHECK(p == doctest::Approx(std::pow(2.0 / 3.0, 100)).epsilon(1e-9));
    CHECK(p < 0.05);
  }
  SUBCASE("2 positives out of 3 is not significant") {
    CHECK(binomial_tail_geq(3, 2, 2.0 / 3.0) ==
          doctest::Approx(20.0 / 27.0));
  }
  SUBCASE("zero positives never significant") {
    CHECK(binomial_tail_geq(50, 0, 2.0 / 3.0) == doctest::Approx(1.0));
  }
  SUBCASE("fractions") {
    const std::vector<std::uint64_t> pos{100, 2, 0};
    const std::vector<std::uint64_t> neg{0, 1, 5};
    CHECK(significant_fraction(pos, neg, 0.05) ==
          doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("tail sums are exact on small cases") {
    // Compare against direct summation.
    for (std::uint64_t n : {5ull, 12ull, 30ull}) {
      for (std::uint64_t k = 0; k <= n; ++k) {
        double direct = 0.0;
        for (std::uint64_t i = k; i <= n; ++i) {
          double term = std::exp(std::lgamma(static_cast<double>(n + 1)) -
                                 std::lgamma(static_cast<double>(i + 1)) -
                                 std::lgamma(static_cast<double>(n - i + 1)));
          term *= std::pow(2.0 / 3.0, static_cast<double>(i)) *
                  std::pow(1.0 / 3.0, static_cast<double>(n - i));
          direct += term;
        }
        CHECK(binomial_tail_geq(n, k, 2.0 / 3.0) ==
              doctest::Approx(direct).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("run_analysis writes the full CSV set") {
  Graph g = synth_scale_free(150, 3, 31);
  AnalyzeConfig cfg;
  cfg.walk.walk_length = 20;
  cfg.walk.walks_per_node = 4;
  cfg.walk.window = 5;
  cfg.walk.seed = 3;
  cfg.betas = {0.5, 1.0};
  cfg.seed = 9;

  test_util::TempDir dir;
  auto result = run_analysis(g, cfg, dir.path().string());

  CHECK(result.total_pairs ==
        total_pairs(g.node_count(), cfg.walk));
  CHECK(result.unique_pairs > 0);
  CHECK(result.betas.size() == 2);
  CHECK(result.betas[0].t_beta >= 1);
  CHECK(!result.betas[1].transition_empirical.has_value());  // beta = 1
  CHECK(result.betas[1].t_beta == 1);

  for (const char* name :
       {"skew.csv", "significance.csv", "summary.csv",
        "rank_freq_beta_0.5.csv", "rank_freq_beta_1.csv"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(dir.path() / name));
  }

  auto skew = test_util::read_file(dir.file("skew.csv"));
  CHECK(skew.rfind("percent,fraction\n", 0) == 0);
}
