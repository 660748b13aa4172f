/* smoothwalk: random-walk node embeddings with smoothed positive-pair
 * sampling. C interface over the C++ core; every object is an opaque
 * handle, every fallible call returns a status code. On failure,
 * sw_last_error() describes the problem for the calling thread. */

#ifndef SMOOTHWALK_H
#define SMOOTHWALK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status {
  SW_OK = 0,
  SW_ERROR_INVALID_ARGUMENT = 1,
  SW_ERROR_IO = 2,
  SW_ERROR_PARSE = 3,
  SW_ERROR_STATE = 4,
  SW_ERROR_NO_MEMORY = 5,
  SW_ERROR_INTERNAL = 6
} sw_status;

const char* sw_status_name(sw_status status);

/* Message for the most recent failure on this thread; empty string if the
 * last call succeeded. The pointer stays valid until the next API call on
 * the same thread. */
const char* sw_last_error(void);

const char* sw_version(void);

/* ------------------------------------------------------------------ */
/* Graphs                                                              */

typedef struct sw_graph sw_graph;

/* Text edge list: two integer ids per line, '#' comments ignored.
 * External ids are remapped densely; the mapping stays on the handle. */
sw_status sw_graph_load(const char* path, sw_graph** out);
sw_status sw_graph_save(const sw_graph* g, const char* path);
sw_status sw_graph_save_id_map(const sw_graph* g, const char* path);
void sw_graph_free(sw_graph* g);

uint32_t sw_graph_nodes(const sw_graph* g);
uint64_t sw_graph_edges(const sw_graph* g);
int64_t sw_graph_external_id(const sw_graph* g, uint32_t node);
uint64_t sw_graph_self_loops_dropped(const sw_graph* g);
uint64_t sw_graph_duplicates_dropped(const sw_graph* g);
uint32_t sw_graph_degree(const sw_graph* g, uint32_t node);
int sw_graph_is_connected(const sw_graph* g);

sw_status sw_graph_clustering(const sw_graph* g, double* out);

/* Preferential-attachment generator; connected, deterministic per seed. */
sw_status sw_graph_synth_scale_free(uint32_t n, uint32_t m_attach,
                                    uint64_t seed, sw_graph** out);

/* Adds extra_edges edges between neighbors of high-degree nodes. */
sw_status sw_graph_densify(const sw_graph* g, double hub_fraction,
                           uint64_t extra_edges, uint64_t seed,
                           sw_graph** out);

/* Removes floor(fraction * m) edges, keeping the graph connected. The
 * removed edges are returned as a flat (u, v) array on the residual
 * handle's allocator; free with sw_edges_free. */
sw_status sw_graph_split(const sw_graph* g, double fraction, uint64_t seed,
                         sw_graph** residual, uint32_t** removed,
                         uint64_t* removed_count);
void sw_edges_free(uint32_t* edges);

/* ------------------------------------------------------------------ */
/* Walk corpus                                                         */

typedef struct sw_walk_params {
  uint32_t walks_per_node; /* s */
  uint32_t walk_length;    /* l */
  uint32_t window;         /* t */
  uint64_t seed;
  int node2vec;            /* 0: uniform, 1: biased by (p, q) */
  double p;
  double q;
} sw_walk_params;

void sw_walk_params_init(sw_walk_params* params);

/* Pairs emitted by one pass over the corpus (M). */
sw_status sw_corpus_pair_count(const sw_graph* g, const sw_walk_params* walk,
                               uint64_t* out);

/* Unique pair count (P), exact or extrapolated depending on corpus size. */
sw_status sw_corpus_unique_pairs(const sw_graph* g,
                                 const sw_walk_params* walk, uint64_t* out);

/* Walk dump: one walk per line, space-separated internal node ids. */
sw_status sw_walks_write(const sw_graph* g, const sw_walk_params* walk,
                         const char* path, uint32_t threads);

/* ------------------------------------------------------------------ */
/* Frequency oracle (two-pass Frequent sketch)                         */

typedef struct sw_oracle sw_oracle;

sw_status sw_oracle_build(const sw_graph* g, const sw_walk_params* walk,
                          uint64_t budget, sw_oracle** out);
sw_status sw_oracle_save(const sw_oracle* oracle, const char* path);
sw_status sw_oracle_load(const char* path, sw_oracle** out);
void sw_oracle_free(sw_oracle* oracle);

uint64_t sw_oracle_total_pairs(const sw_oracle* oracle);
uint64_t sw_oracle_budget(const sw_oracle* oracle);
uint64_t sw_oracle_stored(const sw_oracle* oracle);
double sw_oracle_default_weight(const sw_oracle* oracle);
/* Exact count for stored pairs, max(default weight, 1) otherwise. */
double sw_oracle_estimate(const sw_oracle* oracle, uint32_t u, uint32_t v);

/* ------------------------------------------------------------------ */
/* Training                                                            */

typedef struct sw_embeddings sw_embeddings;

typedef struct sw_train_params {
  uint32_t dim;
  uint32_t negatives;    /* k */
  double neg_alpha;      /* negative distribution exponent */
  int use_adam;          /* 0: plain SGD */
  double learning_rate;
  uint32_t batch_size;
  double beta;           /* smoothing exponent; 0 picks the preset */
  uint64_t budget;       /* sketch budget; 0 derives from budget_fraction */
  double budget_fraction;
  uint64_t sampler_seed;
  uint64_t train_seed;
} sw_train_params;

void sw_train_params_init(sw_train_params* params);

typedef struct sw_train_stats {
  uint32_t passes;
  uint64_t accepted;
  uint64_t rejected;
  double beta;      /* resolved */
  uint64_t budget;  /* resolved */
} sw_train_stats;

/* Runs the walk -> sketch -> sample -> train chain. `oracle` may be NULL
 * (it is built on the fly). `pass_csv_path` may be NULL; otherwise one
 * "pass,accepted,rejected" row per corpus pass is written there. */
sw_status sw_train(const sw_graph* g, const sw_walk_params* walk,
                   const sw_train_params* train, const sw_oracle* oracle,
                   const char* pass_csv_path, sw_train_stats* stats,
                   sw_embeddings** out);

uint32_t sw_embeddings_rows(const sw_embeddings* emb);
uint32_t sw_embeddings_dim(const sw_embeddings* emb);
/* Borrowed pointer to one center row, valid while the handle lives. */
const double* sw_embeddings_row(const sw_embeddings* emb, uint32_t node);

/* Text export ("n d" header, external id + row per line). */
sw_status sw_embeddings_export(const sw_embeddings* emb, const sw_graph* g,
                               const char* path);
void sw_embeddings_free(sw_embeddings* emb);

/* ------------------------------------------------------------------ */
/* Diagnostics                                                         */

typedef struct sw_analyze_params {
  sw_walk_params walk;
  const double* betas;
  size_t beta_count;
  double budget_fraction;
  uint32_t negatives;
  double neg_alpha;
  uint64_t seed;
} sw_analyze_params;

void sw_analyze_params_init(sw_analyze_params* params);

/* Writes skew.csv, rank_freq_beta_*.csv, significance.csv and summary.csv
 * under out_dir. */
sw_status sw_analyze(const sw_graph* g, const sw_analyze_params* params,
                     const char* out_dir);

/* ------------------------------------------------------------------ */
/* Link prediction experiment                                          */

typedef struct sw_eval_params {
  sw_walk_params walk;
  sw_train_params train;
  const uint32_t* k_values;
  size_t k_count;
  double candidate_fraction;
  uint32_t repetitions;
  double split_fraction;
  int retrain_per_trial;
  uint32_t threads;
  uint64_t seed;
} sw_eval_params;

void sw_eval_params_init(sw_eval_params* params);

/* Runs the split/train/rank protocol for each beta in `betas` and writes
 * a "method,beta,b,k,metric,mean,std,runs" table to scores_csv_path and,
 * when more than one beta is given, pairwise t statistics to
 * ttests_csv_path (may be NULL). */
sw_status sw_eval(const sw_graph* g, const sw_eval_params* params,
                  const double* betas, size_t beta_count,
                  const char* scores_csv_path, const char* ttests_csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SMOOTHWALK_H */
