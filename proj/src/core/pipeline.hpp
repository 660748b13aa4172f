#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/sampler.hpp"
#include "core/sketch.hpp"
#include "core/train.hpp"
#include "core/walks.hpp"

namespace smoothwalk {

// beta preset by graph structure: aggressive smoothing pays off on graphs
// with little local clustering.
inline double default_beta(double clustering) {
  return clustering < 0.2 ? 0.5 : 0.75;
}

// Unique pair count of the walk corpus. Counted exactly when the corpus is
// small; otherwise extrapolated from two strided walk subsamples.
std::uint64_t estimate_unique_pairs(const Graph& g, const WalkConfig& cfg);

struct TrainPipelineConfig {
  WalkConfig walk;
  double beta = 0.0;              // 0: pick by clustering coefficient
  std::uint64_t budget = 0;       // 0: budget_fraction of estimated P
  double budget_fraction = 0.10;
  TrainConfig train;
  std::uint64_t sampler_seed = 1;
};

struct TrainPipelineResult {
  EmbeddingMatrices embeddings;
  SampleStats stats;
  double beta = 0.0;                        // resolved
  std::uint64_t budget = 0;                 // resolved
  std::uint64_t estimated_unique_pairs = 0; // 0 when not estimated
  std::uint64_t total_pairs = 0;            // M
  std::vector<double> batch_losses;
};

// Full chain: walks -> sketch (two passes) -> smooth sampling -> SGNS.
// An oracle built earlier over the same corpus can be passed to skip the
// sketching passes; with beta = 1 no sketch is needed at all.
TrainPipelineResult run_training(const Graph& g,
                                 const TrainPipelineConfig& cfg,
                                 const FrequencyOracle* oracle);

// Builds the two-pass oracle for the corpus defined by (g, walk).
FrequencyOracle build_oracle(const Graph& g, const WalkConfig& walk,
                             std::uint64_t budget);

struct AnalyzeConfig {
  WalkConfig walk;
  std::vector<double> betas{0.5, 0.75, 1.0};
  double budget_fraction = 0.10;
  std::uint32_t negatives = 5;
  double neg_alpha = 0.75;
  std::uint64_t seed = 1;
};

struct AnalyzeBetaSummary {
  double beta = 0.0;
  double m_beta = 0.0;
  std::uint64_t t_beta = 1;
  std::optional<std::uint64_t> transition_empirical;
  std::string predicted_regime;
  std::optional<double> transition_predicted;
  double significant_fraction = 0.0;
  std::uint64_t significant_pairs_tested = 0;
};

struct AnalyzeResult {
  std::uint64_t total_pairs = 0;   // M
  std::uint64_t unique_pairs = 0;  // P
  double zipf_z = 0.0;
  std::vector<AnalyzeBetaSummary> betas;
};

// Exact-table diagnostics: skew table, Zipf fit, transition ranks and
// binomial significance fractions, written as CSV files under out_dir.
AnalyzeResult run_analysis(const Graph& g, const AnalyzeConfig& cfg,
                           const std::string& out_dir);

void write_pass_csv(const std::string& path, const SampleStats& stats);

}  // namespace smoothwalk
