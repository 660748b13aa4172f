#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/train.hpp"
#include "core/walks.hpp"

namespace smoothwalk {

struct CandidateSet {
  std::vector<PairKey> pairs;             // normalized, u < v
  std::vector<std::uint8_t> is_positive;  // aligned with pairs
  std::uint64_t positive_count = 0;
};

// Uniform sample without replacement of ceil(fraction * C(n,2)) node pairs
// plus ceil(fraction * |removed|) removed edges, merged. A candidate is a
// positive iff it is one of the removed edges.
CandidateSet candidate_sample(const Graph& g_full, std::span<const Edge> removed,
                              double fraction, std::uint64_t seed);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// Scores candidates by the dot product of the two center rows; ties break
// by pair key so rankings are deterministic.
PrecisionRecall precision_recall_at_k(const EmbeddingMatrices& emb,
                                      const CandidateSet& candidates,
                                      std::uint32_t k);

struct MethodConfig {
  std::string name = "smoothdeepwalk";
  WalkConfig walk;
  double beta = 1.0;
  std::uint64_t budget = 0;       // 0: derive from budget_fraction
  double budget_fraction = 0.10;  // of the estimated unique pair count
  TrainConfig train;
  std::uint64_t sampler_seed = 1;
};

struct EvalConfig {
  std::uint64_t seed = 1;
  std::vector<std::uint32_t> k_values{100};
  double candidate_fraction = 0.001;
  std::uint32_t repetitions = 100;
  double split_fraction = 0.2;
  bool retrain_per_trial = false;
  std::uint32_t threads = 1;
};

struct MetricSeries {
  std::uint32_t k = 0;
  std::string metric;           // "precision" or "recall"
  std::vector<double> values;   // one entry per repetition
  double mean() const;
  double stddev() const;
};

struct ScoreRow {
  std::string method;
  double beta = 0.0;
  std::uint64_t budget = 0;
  std::uint32_t k = 0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  std::uint32_t runs = 0;
};

struct ExperimentResult {
  MethodConfig method;
  std::uint64_t resolved_budget = 0;
  std::vector<MetricSeries> series;
  std::vector<ScoreRow> summary() const;
};

// Protocol: split once, train one embedding on the residual graph, then
// repeat candidate sampling with per-trial seeds. With retrain_per_trial
// the embedding is retrained for every trial (sensitivity studies).
ExperimentResult run_experiment(const Graph& g, const MethodConfig& method,
                                const EvalConfig& eval);

void write_scores_csv(const std::string& path,
                      std::span<const ScoreRow> rows);

// Two-sample t statistics over per-repetition score lists.
double welch_t_statistic(std::span<const double> a, std::span<const double> b);
double paired_t_statistic(std::span<const double> a, std::span<const double> b);

}  // namespace smoothwalk
