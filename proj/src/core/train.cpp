#include "core/train.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace smoothwalk {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double pair_loss_and_gradient(std::span<const double> u,
                              std::span<const double> v, int label,
                              std::span<double> grad_u,
                              std::span<double> grad_v) {
  const double s = dot(u, v);
  const double g = sigmoid(s) - static_cast<double>(label);
  for (std::size_t i = 0; i < u.size(); ++i) {
    grad_u[i] = g * v[i];
    grad_v[i] = g * u[i];
  }
  return logistic_loss(s, label);
}

void negative_samples(std::uint32_t k, const NodeDistribution& dist, Rng& rng,
                      std::vector<NodeId>& out) {
  out.clear();
  out.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) out.push_back(dist.sample(rng));
}

EmbeddingMatrices EmbeddingMatrices::init(NodeId n, std::uint32_t dim,
                                          std::uint64_t seed) {
  if (n == 0 || dim == 0) throw std::invalid_argument("empty embedding shape");
  EmbeddingMatrices emb;
  emb.n = n;
  emb.dim = dim;
  const std::size_t total = static_cast<std::size_t>(n) * dim;
  emb.center.resize(total);
  emb.context.resize(total);
  Rng rng(mix_seed(seed, seed_tag::kTrainInit));
  const double half = 0.5 / static_cast<double>(dim);
  for (auto& x : emb.center) x = (2.0 * rng.next_double() - 1.0) * half;
  for (auto& x : emb.context) x = (2.0 * rng.next_double() - 1.0) * half;
  return emb;
}

PairClassifierTrainer::PairClassifierTrainer(NodeId n, const TrainConfig& cfg,
                                             NodeDistribution negatives)
    : cfg_(cfg),
      lr_(cfg.learning_rate),
      negatives_(std::move(negatives)),
      rng_(mix_seed(cfg.seed, seed_tag::kNegative)),
      params_(EmbeddingMatrices::init(n, cfg.dim, cfg.seed)) {
  if (cfg.negatives < 1) throw std::invalid_argument("need k >= 1 negatives");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (cfg.learning_rate <= 0.0)
    throw std::invalid_argument("learning rate must be positive");
  const std::size_t total = static_cast<std::size_t>(n) * cfg.dim;
  grad_center_.assign(total, 0.0);
  grad_context_.assign(total, 0.0);
  center_flag_.assign(n, 0);
  context_flag_.assign(n, 0);
  if (cfg.optimizer == Optimizer::kAdam) {
    m_center_.assign(total, 0.0);
    v_center_.assign(total, 0.0);
    m_context_.assign(total, 0.0);
    v_context_.assign(total, 0.0);
    t_center_.assign(n, 0);
    t_context_.assign(n, 0);
  }
  batch_.reserve(static_cast<std::size_t>(cfg.batch_size) *
                 (cfg.negatives + 1));
}

void PairClassifierTrainer::feed(NodeId u, NodeId v) {
  ++positives_;
  batch_.push_back({u, v, 1});
  for (std::uint32_t i = 0; i < cfg_.negatives; ++i)
    batch_.push_back({u, negatives_.sample(rng_), 0});
  if (++batch_positives_ >= cfg_.batch_size) apply_batch();
}

void PairClassifierTrainer::finish() {
  if (!batch_.empty()) apply_batch();
}

void PairClassifierTrainer::apply_batch() {
  const std::uint32_t dim = cfg_.dim;
  const double inv_examples = 1.0 / static_cast<double>(batch_.size());
  double loss = 0.0;

  for (const Example& ex : batch_) {
    auto cu = params_.center_row(ex.u);
    auto xv = params_.context_row(ex.v);
    const double s = dot(cu, xv);
    loss += logistic_loss(s, ex.label);
    const double g = (sigmoid(s) - static_cast<double>(ex.label)) * inv_examples;
    double* gu = grad_center_.data() + static_cast<std::size_t>(ex.u) * dim;
    double* gv = grad_context_.data() + static_cast<std::size_t>(ex.v) * dim;
    for (std::uint32_t i = 0; i < dim; ++i) {
      gu[i] += g * xv[i];
      gv[i] += g * cu[i];
    }
    if (!center_flag_[ex.u]) {
      center_flag_[ex.u] = 1;
      touched_center_.push_back(ex.u);
    }
    if (!context_flag_[ex.v]) {
      context_flag_[ex.v] = 1;
      touched_context_.push_back(ex.v);
    }
  }

  loss *= inv_examples;
  if (!std::isfinite(loss))
    throw StateError("non-finite loss in batch " +
                     std::to_string(batch_losses_.size()) + " (after " +
                     std::to_string(positives_) + " positives)");
  batch_losses_.push_back(loss);

  for (NodeId row : touched_center_)
    step_row(params_.center, grad_center_, m_center_, v_center_, t_center_,
             row);
  for (NodeId row : touched_context_)
    step_row(params_.context, grad_context_, m_context_, v_context_,
             t_context_, row);

  for (NodeId row : touched_center_) center_flag_[row] = 0;
  for (NodeId row : touched_context_) context_flag_[row] = 0;
  touched_center_.clear();
  touched_context_.clear();
  batch_.clear();
  batch_positives_ = 0;
}

void PairClassifierTrainer::step_row(std::vector<double>& param,
                                     std::vector<double>& grad,
                                     std::vector<double>& adam_m,
                                     std::vector<double>& adam_v,
                                     std::vector<std::uint64_t>& adam_t,
                                     NodeId row) {
  const std::uint32_t dim = cfg_.dim;
  const std::size_t base = static_cast<std::size_t>(row) * dim;
  double* p = param.data() + base;
  double* g = grad.data() + base;
  if (cfg_.optimizer == Optimizer::kSgd) {
    for (std::uint32_t i = 0; i < dim; ++i) {
      p[i] -= lr_ * g[i];
      g[i] = 0.0;
    }
    return;
  }
  // Lazy Adam: moments advance only when a row is touched.
  const std::uint64_t t = ++adam_t[row];
  const double c1 = 1.0 - std::pow(cfg_.adam_beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg_.adam_beta2, static_cast<double>(t));
  double* m = adam_m.data() + base;
  double* v = adam_v.data() + base;
  for (std::uint32_t i = 0; i < dim; ++i) {
    m[i] = cfg_.adam_beta1 * m[i] + (1.0 - cfg_.adam_beta1) * g[i];
    v[i] = cfg_.adam_beta2 * v[i] + (1.0 - cfg_.adam_beta2) * g[i] * g[i];
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    p[i] -= lr_ * m_hat / (std::sqrt(v_hat) + cfg_.adam_eps);
    g[i] = 0.0;
  }
}

EmbeddingMatrices train(const std::function<void(const PairSink&)>& positives,
                        const Graph& g, const TrainConfig& cfg) {
  PairClassifierTrainer trainer(
      g.node_count(), cfg, neg_sampling_distribution(g, cfg.neg_alpha));
  positives([&](NodeId u, NodeId v) { trainer.feed(u, v); });
  trainer.finish();
  return trainer.take();
}

void export_embeddings(const EmbeddingMatrices& emb,
                       std::span<const std::int64_t> external_ids,
                       const std::string& path) {
  if (!external_ids.empty() && external_ids.size() != emb.n)
    throw std::invalid_argument("id map size does not match embedding rows");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write embeddings: " + path);

  std::vector<NodeId> order(emb.n);
  std::iota(order.begin(), order.end(), 0);
  if (!external_ids.empty())
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return external_ids[a] < external_ids[b];
    });

  out << emb.n << ' ' << emb.dim << '\n';
  char buf[32];
  for (NodeId row : order) {
    const std::int64_t ext =
        external_ids.empty() ? row : external_ids[row];
    out << ext;
    auto values = emb.center_row(row);
    for (double x : values) {
      std::snprintf(buf, sizeof(buf), " %.9g", x);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path);
}

LoadedEmbeddings load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings: " + path);
  LoadedEmbeddings result;
  std::uint64_t rows = 0;
  if (!(in >> rows >> result.dim) || result.dim == 0)
    throw ParseError("bad embedding header in " + path);
  result.ids.reserve(rows);
  result.rows.reserve(rows * result.dim);
  for (std::uint64_t r = 0; r < rows; ++r) {
    std::int64_t id = 0;
    if (!(in >> id)) throw ParseError("truncated embeddings file: " + path);
    result.ids.push_back(id);
    for (std::uint32_t i = 0; i < result.dim; ++i) {
      double x = 0.0;
      if (!(in >> x)) throw ParseError("truncated embeddings file: " + path);
      result.rows.push_back(x);
    }
  }
  return result;
}

}  // namespace smoothwalk
