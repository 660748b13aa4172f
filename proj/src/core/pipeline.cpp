#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "core/analysis.hpp"
#include "core/error.hpp"

namespace smoothwalk {

namespace {

// Unique pairs over walks whose index is a multiple of stride.
std::uint64_t strided_unique_pairs(const WalkGenerator& gen,
                                   std::uint64_t stride) {
  const Graph& g = gen.graph();
  const WalkConfig& cfg = gen.config();
  std::unordered_set<PairKey> seen;
  std::vector<NodeId> walk;
  std::uint64_t index = 0;
  for (NodeId node = 0; node < g.node_count(); ++node) {
    for (std::uint32_t rep = 0; rep < cfg.walks_per_node; ++rep, ++index) {
      if (index % stride != 0) continue;
      gen.generate(node, rep, walk);
      for_each_skipgram_pair(std::span<const NodeId>(walk), cfg.window,
                             [&](NodeId u, NodeId v) {
                               seen.insert(pair_key(u, v));
                             });
    }
  }
  return seen.size();
}

}  // namespace

std::uint64_t estimate_unique_pairs(const Graph& g, const WalkConfig& cfg) {
  const std::uint64_t m = total_pairs(g.node_count(), cfg);
  WalkGenerator gen(g, cfg);
  if (m <= 20'000'000) return strided_unique_pairs(gen, 1);

  // Heaps-style extrapolation: unique counts at 1% and 2% of the walks
  // give the local growth exponent, which carries the 1% count to the
  // full corpus.
  const std::uint64_t u100 = strided_unique_pairs(gen, 100);
  const std::uint64_t u50 = strided_unique_pairs(gen, 50);
  double gamma = std::log(static_cast<double>(u50) /
                          static_cast<double>(std::max<std::uint64_t>(1, u100))) /
                 std::log(2.0);
  gamma = std::clamp(gamma, 0.5, 1.0);
  const double estimate =
      static_cast<double>(u100) * std::pow(100.0, gamma);
  return static_cast<std::uint64_t>(estimate);
}

FrequencyOracle build_oracle(const Graph& g, const WalkConfig& walk,
                             std::uint64_t budget) {
  WalkPairStream corpus(g, walk);
  FrequentSketch sketch = build_sketch(corpus, budget);
  return FrequencyOracle(std::move(sketch), corpus);
}

TrainPipelineResult run_training(const Graph& g,
                                 const TrainPipelineConfig& cfg,
                                 const FrequencyOracle* oracle) {
  TrainPipelineResult result;
  result.beta = cfg.beta != 0.0 ? cfg.beta
                                : default_beta(clustering_coefficient(g));
  if (result.beta <= 0.0 || result.beta > 1.0)
    throw std::invalid_argument("beta must be in (0, 1]");

  WalkPairStream corpus(g, cfg.walk);
  result.total_pairs = corpus.pair_count();

  std::optional<FrequencyOracle> built;
  const FrequencySource* freqs = nullptr;

  // beta = 1 accepts every pair regardless of its frequency; the sketch
  // passes would be wasted work.
  struct UnitFrequency final : FrequencySource {
    double frequency(NodeId, NodeId) const override { return 1.0; }
  };
  UnitFrequency unit;

  if (oracle != nullptr) {
    if (oracle->total_pairs() != result.total_pairs)
      throw StateError("oracle was built over a different corpus (" +
                       std::to_string(oracle->total_pairs()) + " pairs vs " +
                       std::to_string(result.total_pairs) + ")");
    result.budget = oracle->budget();
    freqs = oracle;
  } else if (result.beta == 1.0) {
    result.budget = 0;
    freqs = &unit;
  } else {
    result.budget = cfg.budget;
    if (result.budget == 0) {
      result.estimated_unique_pairs = estimate_unique_pairs(g, cfg.walk);
      result.budget = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(
                 cfg.budget_fraction *
                 static_cast<double>(result.estimated_unique_pairs)));
    }
    built.emplace(build_sketch(corpus, result.budget), corpus);
    freqs = &*built;
  }

  PairClassifierTrainer trainer(
      g.node_count(), cfg.train,
      neg_sampling_distribution(g, cfg.train.neg_alpha));

  SamplerConfig sampler;
  sampler.beta = result.beta;
  sampler.target = result.total_pairs;
  sampler.seed = cfg.sampler_seed;
  result.stats = smooth_stream(corpus, *freqs, sampler,
                               [&](NodeId u, NodeId v) { trainer.feed(u, v); });
  trainer.finish();
  result.batch_losses = trainer.batch_losses();
  result.embeddings = trainer.take();
  return result;
}

namespace {

void write_csv_line(std::ofstream& out, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out << buf;
}

}  // namespace

AnalyzeResult run_analysis(const Graph& g, const AnalyzeConfig& cfg,
                           const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  WalkPairStream corpus(g, cfg.walk);
  FrequencyTable table = FrequencyTable::count(corpus);

  AnalyzeResult result;
  result.total_pairs = table.total();
  result.unique_pairs = table.unique();
  result.zipf_z = table.unique() >= 10 ? fit_zipf(table) : 0.0;

  {
    std::vector<double> percents;
    for (int k = 1; k <= 10; ++k) percents.push_back(k);
    auto fractions = top_mass_fraction(table, percents);
    std::ofstream out(fs::path(out_dir) / "skew.csv");
    if (!out) throw IoError("cannot write skew.csv");
    out << "percent,fraction\n";
    for (std::size_t i = 0; i < percents.size(); ++i)
      write_csv_line(out, "%g,%.10g\n", percents[i], fractions[i]);
  }

  const auto counts = table.sorted_counts();
  const std::uint64_t budget = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(cfg.budget_fraction *
                                    static_cast<double>(table.unique())));

  std::ofstream significance(fs::path(out_dir) / "significance.csv");
  if (!significance) throw IoError("cannot write significance.csv");
  significance << "beta,fraction_significant,pairs_tested\n";

  std::ofstream summary(fs::path(out_dir) / "summary.csv");
  if (!summary) throw IoError("cannot write summary.csv");
  summary << "beta,m,p,zipf_z,m_beta,t_beta,transition_empirical,"
             "predicted_regime,transition_predicted\n";

  // Sketch and negative distribution are beta-independent.
  FrequencyOracle oracle(build_sketch(corpus, budget), corpus);
  NodeDistribution mu = neg_sampling_distribution(g, cfg.neg_alpha);

  for (double beta : cfg.betas) {
    AnalyzeBetaSummary row;
    row.beta = beta;
    const auto mass = m_beta(counts, beta);
    row.m_beta = mass.m_beta;
    row.t_beta = mass.t_beta;
    row.transition_empirical = transition_rank_empirical(table, beta);
    const auto predicted =
        transition_rank_predicted(result.zipf_z, beta, table.unique());
    row.predicted_regime = transition_regime_name(predicted.regime);
    row.transition_predicted = predicted.rank;

    // Rank/frequency curve with the expected smoothed counts.
    {
      char name[64];
      std::snprintf(name, sizeof(name), "rank_freq_beta_%g.csv", beta);
      std::ofstream out(fs::path(out_dir) / name);
      if (!out) throw IoError("cannot write rank-frequency csv");
      out << "rank,frequency,smoothed_frequency\n";
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const double smoothed =
            static_cast<double>(mass.t_beta) *
            std::pow(static_cast<double>(counts[i]), beta);
        write_csv_line(out, "%zu,%llu,%.10g\n", i + 1,
                       static_cast<unsigned long long>(counts[i]), smoothed);
      }
    }

    // Positive/negative sample counts for sketched pairs under this beta.
    {
      std::unordered_map<PairKey, std::pair<std::uint64_t, std::uint64_t>>
          observed;
      observed.reserve(oracle.stored());
      Rng neg_rng(mix_seed(cfg.seed, seed_tag::kNegative, 0x414e41ull));
      SamplerConfig sampler;
      sampler.beta = beta;
      sampler.target = table.total();
      sampler.seed = cfg.seed;
      smooth_stream(corpus, oracle, sampler, [&](NodeId u, NodeId v) {
        if (oracle.contains(u, v)) ++observed[pair_key(u, v)].first;
        for (std::uint32_t i = 0; i < cfg.negatives; ++i) {
          const NodeId x = mu.sample(neg_rng);
          if (oracle.contains(u, x)) ++observed[pair_key(u, x)].second;
        }
      });
      std::vector<std::uint64_t> pos, neg;
      pos.reserve(observed.size());
      neg.reserve(observed.size());
      for (const auto& [key, counts_pair] : observed) {
        pos.push_back(counts_pair.first);
        neg.push_back(counts_pair.second);
      }
      row.significant_pairs_tested = pos.size();
      row.significant_fraction =
          pos.empty() ? 0.0 : significant_fraction(pos, neg, 0.05);
      write_csv_line(significance, "%g,%.10g,%llu\n", beta,
                     row.significant_fraction,
                     static_cast<unsigned long long>(pos.size()));
    }

    write_csv_line(summary, "%g,%llu,%llu,%.10g,%.10g,%llu,", beta,
                   static_cast<unsigned long long>(result.total_pairs),
                   static_cast<unsigned long long>(result.unique_pairs),
                   result.zipf_z, row.m_beta,
                   static_cast<unsigned long long>(row.t_beta));
    if (row.transition_empirical)
      write_csv_line(summary, "%llu,",
                     static_cast<unsigned long long>(*row.transition_empirical));
    else
      summary << "none,";
    summary << row.predicted_regime << ',';
    if (row.transition_predicted)
      write_csv_line(summary, "%.10g\n", *row.transition_predicted);
    else
      summary << "none\n";

    result.betas.push_back(std::move(row));
  }
  return result;
}

void write_pass_csv(const std::string& path, const SampleStats& stats) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write pass stats: " + path);
  out << "pass,accepted,rejected\n";
  for (const auto& pass : stats.per_pass)
    out << pass.pass << ',' << pass.accepted << ',' << pass.rejected << '\n';
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace smoothwalk
