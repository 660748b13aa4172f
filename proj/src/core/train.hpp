#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/rng.hpp"
#include "core/stream.hpp"
#include "core/types.hpp"

namespace smoothwalk {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log sigmoid(s) for label 1, -log sigmoid(-s) for label 0, computed via
// log1p so large |s| cannot overflow.
inline double logistic_loss(double score, int label) {
  const double s = label ? score : -score;
  if (s >= 0.0) return std::log1p(std::exp(-s));
  return -s + std::log1p(std::exp(s));
}

double dot(std::span<const double> a, std::span<const double> b);

// Writes the gradients of logistic_loss(u . v, label) with respect to u
// and v; returns the loss.
double pair_loss_and_gradient(std::span<const double> u,
                              std::span<const double> v, int label,
                              std::span<double> grad_u,
                              std::span<double> grad_v);

void negative_samples(std::uint32_t k, const NodeDistribution& dist, Rng& rng,
                      std::vector<NodeId>& out);

struct EmbeddingMatrices {
  NodeId n = 0;
  std::uint32_t dim = 0;
  std::vector<double> center;
  std::vector<double> context;

  static EmbeddingMatrices init(NodeId n, std::uint32_t dim,
                                std::uint64_t seed);

  std::span<double> center_row(NodeId u) {
    return {center.data() + static_cast<std::size_t>(u) * dim, dim};
  }
  std::span<const double> center_row(NodeId u) const {
    return {center.data() + static_cast<std::size_t>(u) * dim, dim};
  }
  std::span<double> context_row(NodeId u) {
    return {context.data() + static_cast<std::size_t>(u) * dim, dim};
  }
  std::span<const double> context_row(NodeId u) const {
    return {context.data() + static_cast<std::size_t>(u) * dim, dim};
  }
};

enum class Optimizer { kSgd, kAdam };

struct TrainConfig {
  std::uint32_t dim = 128;
  std::uint32_t negatives = 5;
  double neg_alpha = 0.75;
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint32_t batch_size = 1000;
  std::uint64_t seed = 1;
};

// Streaming binary classifier over (center, context) pairs. Each positive
// fed in contributes one label-1 example and `negatives` label-0 examples
// (center paired with draws from the negative distribution). Gradients are
// averaged over the examples of a batch and applied per batch.
class PairClassifierTrainer {
 public:
  PairClassifierTrainer(NodeId n, const TrainConfig& cfg,
                        NodeDistribution negatives);

  void feed(NodeId u, NodeId v);
  void finish();  // flushes the partial batch

  std::uint64_t positives_seen() const { return positives_; }
  const std::vector<double>& batch_losses() const { return batch_losses_; }
  void set_learning_rate(double lr) { lr_ = lr; }

  const EmbeddingMatrices& matrices() const { return params_; }
  EmbeddingMatrices take() { return std::move(params_); }

 private:
  struct Example {
    NodeId u;
    NodeId v;
    int label;
  };

  void apply_batch();
  void step_row(std::vector<double>& param, std::vector<double>& grad,
                std::vector<double>& adam_m, std::vector<double>& adam_v,
                std::vector<std::uint64_t>& adam_t, NodeId row);

  TrainConfig cfg_;
  double lr_;
  NodeDistribution negatives_;
  Rng rng_;
  EmbeddingMatrices params_;

  std::vector<Example> batch_;
  std::uint32_t batch_positives_ = 0;
  std::uint64_t positives_ = 0;
  std::vector<double> batch_losses_;

  // Dense gradient buffers plus touched-row lists, reset per batch.
  std::vector<double> grad_center_, grad_context_;
  std::vector<NodeId> touched_center_, touched_context_;
  std::vector<std::uint8_t> center_flag_, context_flag_;

  // Lazy per-row Adam state.
  std::vector<double> m_center_, v_center_, m_context_, v_context_;
  std::vector<std::uint64_t> t_center_, t_context_;
};

// Convenience wrapper: streams `count` positives from a callback-driven
// source. Used by tests; the pipeline feeds the trainer directly.
EmbeddingMatrices train(const std::function<void(const PairSink&)>& positives,
                        const Graph& g, const TrainConfig& cfg);

// Text export: header "n dim", then one line per node with its external
// id and the center row, ordered by external id. Empty external_ids means
// identity.
void export_embeddings(const EmbeddingMatrices& emb,
                       std::span<const std::int64_t> external_ids,
                       const std::string& path);

struct LoadedEmbeddings {
  std::uint32_t dim = 0;
  std::vector<std::int64_t> ids;
  std::vector<double> rows;  // ids.size() x dim
};
LoadedEmbeddings load_embeddings(const std::string& path);

}  // namespace smoothwalk
