#include "core/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "core/error.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"

namespace smoothwalk {

CandidateSet candidate_sample(const Graph& g_full,
                              std::span<const Edge> removed, double fraction,
                              std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw std::invalid_argument("fraction must be in (0, 1]");
  if (removed.empty())
    throw std::invalid_argument("no removed edges to use as positives");

  const std::uint64_t n = g_full.node_count();
  if (n < 2) throw std::invalid_argument("graph too small");
  const std::uint64_t universe = n * (n - 1) / 2;
  const auto want_pairs = static_cast<std::uint64_t>(
      std::ceil(fraction * static_cast<double>(universe)));
  const auto want_removed = static_cast<std::uint64_t>(
      std::ceil(fraction * static_cast<double>(removed.size())));

  std::unordered_set<PairKey> removed_set;
  removed_set.reserve(removed.size());
  for (const auto& [u, v] : removed)
    removed_set.insert(u < v ? pair_key(u, v) : pair_key(v, u));

  Rng rng(mix_seed(seed, seed_tag::kTrial));
  std::unordered_set<PairKey> chosen;
  chosen.reserve(want_pairs + want_removed);

  if (want_pairs >= universe) {
    for (NodeId u = 0; u + 1 < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) chosen.insert(pair_key(u, v));
  } else if (2 * want_pairs > universe) {
    // Dense request: enumerate and partially shuffle.
    std::vector<PairKey> all;
    all.reserve(universe);
    for (NodeId u = 0; u + 1 < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) all.push_back(pair_key(u, v));
    for (std::uint64_t i = 0; i < want_pairs; ++i) {
      const std::uint64_t j = i + rng.next_below(all.size() - i);
      std::swap(all[i], all[j]);
      chosen.insert(all[i]);
    }
  } else {
    while (chosen.size() < want_pairs) {
      const NodeId u = static_cast<NodeId>(rng.next_below(n));
      NodeId v = static_cast<NodeId>(rng.next_below(n - 1));
      if (v >= u) ++v;
      chosen.insert(u < v ? pair_key(u, v) : pair_key(v, u));
    }
  }

  // Sample of the removed edges (they may duplicate random picks).
  std::vector<std::uint64_t> idx(removed.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::uint64_t i = 0; i < want_removed; ++i) {
    const std::uint64_t j = i + rng.next_below(idx.size() - i);
    std::swap(idx[i], idx[j]);
    const auto& [u, v] = removed[idx[i]];
    chosen.insert(u < v ? pair_key(u, v) : pair_key(v, u));
  }

  CandidateSet out;
  out.pairs.assign(chosen.begin(), chosen.end());
  std::sort(out.pairs.begin(), out.pairs.end());
  out.is_positive.resize(out.pairs.size());
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    out.is_positive[i] = removed_set.count(out.pairs[i]) ? 1 : 0;
    out.positive_count += out.is_positive[i];
  }
  if (out.positive_count == 0)
    throw StateError("candidate sample contains no positives");
  return out;
}

PrecisionRecall precision_recall_at_k(const EmbeddingMatrices& emb,
                                      const CandidateSet& candidates,
                                      std::uint32_t k) {
  if (k == 0 || k > candidates.pairs.size())
    throw std::invalid_argument("k must be in [1, |candidates|]");

  std::vector<std::size_t> order(candidates.pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(candidates.pairs.size());
  for (std::size_t i = 0; i < candidates.pairs.size(); ++i) {
    const PairKey key = candidates.pairs[i];
    score[i] =
        dot(emb.center_row(pair_center(key)), emb.center_row(pair_context(key)));
  }
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (score[a] != score[b]) return score[a] > score[b];
                      return candidates.pairs[a] < candidates.pairs[b];
                    });
  std::uint64_t hits = 0;
  for (std::uint32_t i = 0; i < k; ++i) hits += candidates.is_positive[order[i]];

  PrecisionRecall pr;
  pr.precision = static_cast<double>(hits) / static_cast<double>(k);
  pr.recall = candidates.positive_count == 0
                  ? 0.0
                  : static_cast<double>(hits) /
                        static_cast<double>(candidates.positive_count);
  return pr;
}

double MetricSeries::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double MetricSeries::stddev() const {
  if (values.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<ScoreRow> ExperimentResult::summary() const {
  std::vector<ScoreRow> rows;
  rows.reserve(series.size());
  for (const auto& s : series) {
    ScoreRow row;
    row.method = method.name;
    row.beta = method.beta;
    row.budget = resolved_budget;
    row.k = s.k;
    row.metric = s.metric;
    row.mean = s.mean();
    row.stddev = s.stddev();
    row.runs = static_cast<std::uint32_t>(s.values.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentResult run_experiment(const Graph& g, const MethodConfig& method,
                                const EvalConfig& eval) {
  if (eval.repetitions < 1)
    throw std::invalid_argument("need at least one repetition");

  auto split = split_link_prediction(g, eval.split_fraction, eval.seed);

  TrainPipelineConfig pipeline_cfg;
  pipeline_cfg.walk = method.walk;
  pipeline_cfg.beta = method.beta;
  pipeline_cfg.budget = method.budget;
  pipeline_cfg.budget_fraction = method.budget_fraction;
  pipeline_cfg.train = method.train;
  pipeline_cfg.sampler_seed = method.sampler_seed;

  ExperimentResult result;
  result.method = method;

  struct TrialScores {
    std::vector<PrecisionRecall> at_k;
  };
  std::vector<TrialScores> trials(eval.repetitions);

  auto run_trial = [&](std::uint32_t rep, const EmbeddingMatrices& emb) {
    const std::uint64_t trial_seed = mix_seed(eval.seed, seed_tag::kTrial, rep);
    auto candidates =
        candidate_sample(g, split.removed, eval.candidate_fraction, trial_seed);
    TrialScores scores;
    scores.at_k.reserve(eval.k_values.size());
    for (std::uint32_t k : eval.k_values)
      scores.at_k.push_back(precision_recall_at_k(emb, candidates, k));
    return scores;
  };

  if (eval.retrain_per_trial) {
    for (std::uint32_t rep = 0; rep < eval.repetitions; ++rep) {
      TrainPipelineConfig cfg = pipeline_cfg;
      cfg.sampler_seed = mix_seed(pipeline_cfg.sampler_seed, seed_tag::kTrial, rep);
      cfg.train.seed = mix_seed(pipeline_cfg.train.seed, seed_tag::kTrial, rep);
      auto trained = run_training(split.residual, cfg, nullptr);
      result.resolved_budget = trained.budget;
      trials[rep] = run_trial(rep, trained.embeddings);
    }
  } else {
    auto trained = run_training(split.residual, pipeline_cfg, nullptr);
    result.resolved_budget = trained.budget;
    const auto& emb = trained.embeddings;
    if (eval.threads <= 1) {
      for (std::uint32_t rep = 0; rep < eval.repetitions; ++rep)
        trials[rep] = run_trial(rep, emb);
    } else {
      const std::uint32_t chunk =
          std::max<std::uint32_t>(1, (eval.repetitions + eval.threads - 1) /
                                         eval.threads);
      std::vector<std::future<void>> futures;
      for (std::uint32_t begin = 0; begin < eval.repetitions; begin += chunk) {
        const std::uint32_t end =
            std::min(eval.repetitions, begin + chunk);
        futures.push_back(std::async(std::launch::async, [&, begin, end] {
          for (std::uint32_t rep = begin; rep < end; ++rep)
            trials[rep] = run_trial(rep, emb);
        }));
      }
      for (auto& f : futures) f.get();
    }
  }

  for (std::size_t ki = 0; ki < eval.k_values.size(); ++ki) {
    MetricSeries precision{eval.k_values[ki], "precision", {}};
    MetricSeries recall{eval.k_values[ki], "recall", {}};
    precision.values.reserve(eval.repetitions);
    recall.values.reserve(eval.repetitions);
    for (const auto& trial : trials) {
      precision.values.push_back(trial.at_k[ki].precision);
      recall.values.push_back(trial.at_k[ki].recall);
    }
    result.series.push_back(std::move(precision));
    result.series.push_back(std::move(recall));
  }
  return result;
}

void write_scores_csv(const std::string& path,
                      std::span<const ScoreRow> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scores: " + path);
  out << "method,beta,b,k,metric,mean,std,runs\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), ",%g,%llu,%u,%s,%.10g,%.10g,%u\n",
                  row.beta, static_cast<unsigned long long>(row.budget), row.k,
                  row.metric.c_str(), row.mean, row.stddev, row.runs);
    out << row.method << buf;
  }
  if (!out) throw IoError("write failure on " + path);
}

double welch_t_statistic(std::span<const double> a,
                         std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("need at least two samples per group");
  auto stats = [](std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair<double, double>{mean, ss / (n - 1.0)};
  };
  const auto [ma, va] = stats(a);
  const auto [mb, vb] = stats(b);
  const double se = std::sqrt(va / static_cast<double>(a.size()) +
                              vb / static_cast<double>(b.size()));
  return se == 0.0 ? 0.0 : (ma - mb) / se;
}

double paired_t_statistic(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("paired test needs equal-length samples");
  const double n = static_cast<double>(a.size());
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return sd == 0.0 ? 0.0 : mean / (sd / std::sqrt(n));
}

}  // namespace smoothwalk
