#include "smoothwalk.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/graph.hpp"
#include "core/linkpred.hpp"
#include "core/pipeline.hpp"
#include "core/sketch.hpp"
#include "core/train.hpp"
#include "core/walks.hpp"

namespace {

thread_local std::string g_last_error;

sw_status fail(sw_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <typename Fn>
sw_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SW_OK;
  } catch (const std::invalid_argument& e) {
    return fail(SW_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::overflow_error& e) {
    return fail(SW_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const smoothwalk::IoError& e) {
    return fail(SW_ERROR_IO, e.what());
  } catch (const smoothwalk::ParseError& e) {
    return fail(SW_ERROR_PARSE, e.what());
  } catch (const smoothwalk::StateError& e) {
    return fail(SW_ERROR_STATE, e.what());
  } catch (const std::bad_alloc& e) {
    return fail(SW_ERROR_NO_MEMORY, e.what());
  } catch (const std::exception& e) {
    return fail(SW_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(SW_ERROR_INTERNAL, "unknown error");
  }
}

smoothwalk::WalkConfig to_walk_config(const sw_walk_params& p) {
  smoothwalk::WalkConfig cfg;
  cfg.walks_per_node = p.walks_per_node;
  cfg.walk_length = p.walk_length;
  cfg.window = p.window;
  cfg.seed = p.seed;
  cfg.bias = p.node2vec ? smoothwalk::WalkBias::kNode2Vec
                        : smoothwalk::WalkBias::kUniform;
  cfg.p = p.p;
  cfg.q = p.q;
  return cfg;
}

smoothwalk::TrainPipelineConfig to_pipeline_config(const sw_walk_params& walk,
                                                   const sw_train_params& t) {
  smoothwalk::TrainPipelineConfig cfg;
  cfg.walk = to_walk_config(walk);
  cfg.beta = t.beta;
  cfg.budget = t.budget;
  cfg.budget_fraction = t.budget_fraction;
  cfg.train.dim = t.dim;
  cfg.train.negatives = t.negatives;
  cfg.train.neg_alpha = t.neg_alpha;
  cfg.train.optimizer = t.use_adam ? smoothwalk::Optimizer::kAdam
                                   : smoothwalk::Optimizer::kSgd;
  cfg.train.learning_rate = t.learning_rate;
  cfg.train.batch_size = t.batch_size;
  cfg.train.seed = t.train_seed;
  cfg.sampler_seed = t.sampler_seed;
  return cfg;
}

void require(bool condition, const char* what) {
  if (!condition) throw std::invalid_argument(what);
}

}  // namespace

struct sw_graph {
  smoothwalk::Graph graph;
  std::vector<std::int64_t> external_ids;  // empty: identity
  std::uint64_t self_loops = 0;
  std::uint64_t duplicates = 0;
};

struct sw_oracle {
  smoothwalk::FrequencyOracle oracle;
};

struct sw_embeddings {
  smoothwalk::EmbeddingMatrices matrices;
};

extern "C" {

const char* sw_status_name(sw_status status) {
  switch (status) {
    case SW_OK: return "ok";
    case SW_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case SW_ERROR_IO: return "io error";
    case SW_ERROR_PARSE: return "parse error";
    case SW_ERROR_STATE: return "state error";
    case SW_ERROR_NO_MEMORY: return "out of memory";
    case SW_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* sw_last_error(void) { return g_last_error.c_str(); }

const char* sw_version(void) { return "0.1.0"; }

sw_status sw_graph_load(const char* path, sw_graph** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto loaded = smoothwalk::load_edge_list(path);
    auto* handle = new sw_graph;
    handle->graph = std::move(loaded.graph);
    handle->external_ids = std::move(loaded.external_ids);
    handle->self_loops = loaded.self_loops_dropped;
    handle->duplicates = loaded.duplicate_edges_dropped;
    *out = handle;
  });
}

sw_status sw_graph_save(const sw_graph* g, const char* path) {
  return guarded([&] {
    require(g != nullptr && path != nullptr, "null argument");
    smoothwalk::save_edge_list(g->graph, path);
  });
}

sw_status sw_graph_save_id_map(const sw_graph* g, const char* path) {
  return guarded([&] {
    require(g != nullptr && path != nullptr, "null argument");
    if (g->external_ids.empty()) {
      std::vector<std::int64_t> identity(g->graph.node_count());
      for (std::size_t i = 0; i < identity.size(); ++i)
        identity[i] = static_cast<std::int64_t>(i);
      smoothwalk::save_id_map(identity, path);
    } else {
      smoothwalk::save_id_map(g->external_ids, path);
    }
  });
}

void sw_graph_free(sw_graph* g) { delete g; }

uint32_t sw_graph_nodes(const sw_graph* g) {
  return g ? g->graph.node_count() : 0;
}

uint64_t sw_graph_edges(const sw_graph* g) {
  return g ? g->graph.edge_count() : 0;
}

int64_t sw_graph_external_id(const sw_graph* g, uint32_t node) {
  if (!g || node >= g->graph.node_count()) return -1;
  return g->external_ids.empty() ? node : g->external_ids[node];
}

uint64_t sw_graph_self_loops_dropped(const sw_graph* g) {
  return g ? g->self_loops : 0;
}

uint64_t sw_graph_duplicates_dropped(const sw_graph* g) {
  return g ? g->duplicates : 0;
}

uint32_t sw_graph_degree(const sw_graph* g, uint32_t node) {
  if (!g || node >= g->graph.node_count()) return 0;
  return g->graph.degree(node);
}

int sw_graph_is_connected(const sw_graph* g) {
  return g && g->graph.is_connected() ? 1 : 0;
}

sw_status sw_graph_clustering(const sw_graph* g, double* out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = smoothwalk::clustering_coefficient(g->graph);
  });
}

sw_status sw_graph_synth_scale_free(uint32_t n, uint32_t m_attach,
                                    uint64_t seed, sw_graph** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto* handle = new sw_graph;
    handle->graph = smoothwalk::synth_scale_free(n, m_attach, seed);
    *out = handle;
  });
}

sw_status sw_graph_densify(const sw_graph* g, double hub_fraction,
                           uint64_t extra_edges, uint64_t seed,
                           sw_graph** out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    auto* handle = new sw_graph;
    handle->graph = smoothwalk::densify_neighborhoods(g->graph, hub_fraction,
                                                      extra_edges, seed);
    handle->external_ids = g->external_ids;
    *out = handle;
  });
}

sw_status sw_graph_split(const sw_graph* g, double fraction, uint64_t seed,
                         sw_graph** residual, uint32_t** removed,
                         uint64_t* removed_count) {
  return guarded([&] {
    require(g != nullptr && residual != nullptr && removed != nullptr &&
                removed_count != nullptr,
            "null argument");
    auto split = smoothwalk::split_link_prediction(g->graph, fraction, seed);
    auto* handle = new sw_graph;
    handle->graph = std::move(split.residual);
    handle->external_ids = g->external_ids;
    auto* flat = new uint32_t[2 * split.removed.size()];
    for (std::size_t i = 0; i < split.removed.size(); ++i) {
      flat[2 * i] = split.removed[i].first;
      flat[2 * i + 1] = split.removed[i].second;
    }
    *residual = handle;
    *removed = flat;
    *removed_count = split.removed.size();
  });
}

void sw_edges_free(uint32_t* edges) { delete[] edges; }

void sw_walk_params_init(sw_walk_params* params) {
  if (!params) return;
  params->walks_per_node = 10;
  params->walk_length = 80;
  params->window = 10;
  params->seed = 1;
  params->node2vec = 0;
  params->p = 1.0;
  params->q = 1.0;
}

sw_status sw_corpus_pair_count(const sw_graph* g, const sw_walk_params* walk,
                               uint64_t* out) {
  return guarded([&] {
    require(g != nullptr && walk != nullptr && out != nullptr,
            "null argument");
    *out = smoothwalk::total_pairs(g->graph.node_count(),
                                   to_walk_config(*walk));
  });
}

sw_status sw_corpus_unique_pairs(const sw_graph* g,
                                 const sw_walk_params* walk, uint64_t* out) {
  return guarded([&] {
    require(g != nullptr && walk != nullptr && out != nullptr,
            "null argument");
    *out = smoothwalk::estimate_unique_pairs(g->graph, to_walk_config(*walk));
  });
}

sw_status sw_walks_write(const sw_graph* g, const sw_walk_params* walk,
                         const char* path, uint32_t threads) {
  return guarded([&] {
    require(g != nullptr && walk != nullptr && path != nullptr,
            "null argument");
    smoothwalk::write_walks(g->graph, to_walk_config(*walk), path, threads);
  });
}

sw_status sw_oracle_build(const sw_graph* g, const sw_walk_params* walk,
                          uint64_t budget, sw_oracle** out) {
  return guarded([&] {
    require(g != nullptr && walk != nullptr && out != nullptr,
            "null argument");
    auto* handle = new sw_oracle{
        smoothwalk::build_oracle(g->graph, to_walk_config(*walk), budget)};
    *out = handle;
  });
}

sw_status sw_oracle_save(const sw_oracle* oracle, const char* path) {
  return guarded([&] {
    require(oracle != nullptr && path != nullptr, "null argument");
    oracle->oracle.save(path);
  });
}

sw_status sw_oracle_load(const char* path, sw_oracle** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sw_oracle{smoothwalk::FrequencyOracle::load(path)};
  });
}

void sw_oracle_free(sw_oracle* oracle) { delete oracle; }

uint64_t sw_oracle_total_pairs(const sw_oracle* oracle) {
  return oracle ? oracle->oracle.total_pairs() : 0;
}

uint64_t sw_oracle_budget(const sw_oracle* oracle) {
  return oracle ? oracle->oracle.budget() : 0;
}

uint64_t sw_oracle_stored(const sw_oracle* oracle) {
  return oracle ? oracle->oracle.stored() : 0;
}

double sw_oracle_default_weight(const sw_oracle* oracle) {
  return oracle ? oracle->oracle.default_weight() : 0.0;
}

double sw_oracle_estimate(const sw_oracle* oracle, uint32_t u, uint32_t v) {
  return oracle ? oracle->oracle.frequency(u, v) : 0.0;
}

void sw_train_params_init(sw_train_params* params) {
  if (!params) return;
  params->dim = 128;
  params->negatives = 5;
  params->neg_alpha = 0.75;
  params->use_adam = 1;
  params->learning_rate = 0.01;
  params->batch_size = 1000;
  params->beta = 0.0;
  params->budget = 0;
  params->budget_fraction = 0.10;
  params->sampler_seed = 1;
  params->train_seed = 1;
}

sw_status sw_train(const sw_graph* g, const sw_walk_params* walk,
                   const sw_train_params* train, const sw_oracle* oracle,
                   const char* pass_csv_path, sw_train_stats* stats,
                   sw_embeddings** out) {
  return guarded([&] {
    require(g != nullptr && walk != nullptr && train != nullptr &&
                out != nullptr,
            "null argument");
    auto cfg = to_pipeline_config(*walk, *train);
    auto result = smoothwalk::run_training(
        g->graph, cfg, oracle ? &oracle->oracle : nullptr);
    if (pass_csv_path != nullptr)
      smoothwalk::write_pass_csv(pass_csv_path, result.stats);
    if (stats != nullptr) {
      stats->passes = result.stats.passes;
      stats->accepted = result.stats.accepted;
      stats->rejected = result.stats.rejected;
      stats->beta = result.beta;
      stats->budget = result.budget;
    }
    *out = new sw_embeddings{std::move(result.embeddings)};
  });
}

uint32_t sw_embeddings_rows(const sw_embeddings* emb) {
  return emb ? emb->matrices.n : 0;
}

uint32_t sw_embeddings_dim(const sw_embeddings* emb) {
  return emb ? emb->matrices.dim : 0;
}

const double* sw_embeddings_row(const sw_embeddings* emb, uint32_t node) {
  if (!emb || node >= emb->matrices.n) return nullptr;
  return emb->matrices.center_row(node).data();
}

sw_status sw_embeddings_export(const sw_embeddings* emb, const sw_graph* g,
                               const char* path) {
  return guarded([&] {
    require(emb != nullptr && path != nullptr, "null argument");
    std::span<const std::int64_t> ids;
    if (g != nullptr && !g->external_ids.empty()) ids = g->external_ids;
    smoothwalk::export_embeddings(emb->matrices, ids, path);
  });
}

void sw_embeddings_free(sw_embeddings* emb) { delete emb; }

void sw_analyze_params_init(sw_analyze_params* params) {
  if (!params) return;
  sw_walk_params_init(&params->walk);
  params->betas = nullptr;
  params->beta_count = 0;
  params->budget_fraction = 0.10;
  params->negatives = 5;
  params->neg_alpha = 0.75;
  params->seed = 1;
}

sw_status sw_analyze(const sw_graph* g, const sw_analyze_params* params,
                     const char* out_dir) {
  return guarded([&] {
    require(g != nullptr && params != nullptr && out_dir != nullptr,
            "null argument");
    smoothwalk::AnalyzeConfig cfg;
    cfg.walk = to_walk_config(params->walk);
    if (params->beta_count > 0) {
      require(params->betas != nullptr, "null beta array");
      cfg.betas.assign(params->betas, params->betas + params->beta_count);
    }
    cfg.budget_fraction = params->budget_fraction;
    cfg.negatives = params->negatives;
    cfg.neg_alpha = params->neg_alpha;
    cfg.seed = params->seed;
    smoothwalk::run_analysis(g->graph, cfg, out_dir);
  });
}

void sw_eval_params_init(sw_eval_params* params) {
  if (!params) return;
  sw_walk_params_init(&params->walk);
  sw_train_params_init(&params->train);
  params->k_values = nullptr;
  params->k_count = 0;
  params->candidate_fraction = 0.001;
  params->repetitions = 100;
  params->split_fraction = 0.2;
  params->retrain_per_trial = 0;
  params->threads = 1;
  params->seed = 1;
}

sw_status sw_eval(const sw_graph* g, const sw_eval_params* params,
                  const double* betas, size_t beta_count,
                  const char* scores_csv_path, const char* ttests_csv_path) {
  return guarded([&] {
    require(g != nullptr && params != nullptr && betas != nullptr &&
                beta_count > 0 && scores_csv_path != nullptr,
            "null argument");

    smoothwalk::EvalConfig eval;
    eval.seed = params->seed;
    if (params->k_count > 0) {
      require(params->k_values != nullptr, "null k array");
      eval.k_values.assign(params->k_values,
                           params->k_values + params->k_count);
    }
    eval.candidate_fraction = params->candidate_fraction;
    eval.repetitions = params->repetitions;
    eval.split_fraction = params->split_fraction;
    eval.retrain_per_trial = params->retrain_per_trial != 0;
    eval.threads = params->threads;

    std::vector<smoothwalk::ExperimentResult> results;
    std::vector<smoothwalk::ScoreRow> rows;
    for (size_t i = 0; i < beta_count; ++i) {
      smoothwalk::MethodConfig method;
      method.name = betas[i] == 1.0 ? "deepwalk" : "smoothdeepwalk";
      if (params->walk.node2vec)
        method.name = betas[i] == 1.0 ? "node2vec" : "smoothnode2vec";
      method.walk = to_walk_config(params->walk);
      method.beta = betas[i];
      method.budget = params->train.budget;
      method.budget_fraction = params->train.budget_fraction;
      auto cfg = to_pipeline_config(params->walk, params->train);
      method.train = cfg.train;
      method.sampler_seed = params->train.sampler_seed;
      results.push_back(smoothwalk::run_experiment(g->graph, method, eval));
      for (auto& row : results.back().summary()) rows.push_back(row);
    }
    smoothwalk::write_scores_csv(scores_csv_path, rows);

    if (ttests_csv_path != nullptr && results.size() > 1) {
      std::ofstream out(ttests_csv_path);
      if (!out) throw smoothwalk::IoError("cannot write t-test table");
      out << "method_a,beta_a,method_b,beta_b,k,metric,t_paired,t_welch\n";
      for (size_t a = 0; a < results.size(); ++a) {
        for (size_t b = a + 1; b < results.size(); ++b) {
          for (size_t s = 0; s < results[a].series.size(); ++s) {
            const auto& sa = results[a].series[s];
            const auto& sb = results[b].series[s];
            char buf[128];
            std::snprintf(buf, sizeof(buf), ",%g,", results[a].method.beta);
            out << results[a].method.name << buf << results[b].method.name;
            std::snprintf(buf, sizeof(buf), ",%g,%u,%s,%.10g,%.10g\n",
                          results[b].method.beta, sa.k, sa.metric.c_str(),
                          smoothwalk::paired_t_statistic(sa.values, sb.values),
                          smoothwalk::welch_t_statistic(sa.values, sb.values));
            out << buf;
          }
        }
      }
    }
  });
}

}  // extern "C"
