// Command-line front end for the smoothwalk shared library. Every run
// writes a manifest next to its outputs; --from-manifest replays a run
// into a fresh directory.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothwalk.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& context) {
  std::cerr << "smoothwalk: " << context << ": " << sw_last_error() << "\n";
  std::exit(1);
}

void check(sw_status status, const std::string& context) {
  if (status != SW_OK) fail(context);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// Arguments of the current invocation minus any --out pair; stored in the
// manifest so a run can be replayed against a new output directory.
std::vector<std::string> args_without_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" || args[i] == "-o") {
      ++i;  // skip the value
      continue;
    }
    kept.push_back(args[i]);
  }
  return kept;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::string>& args,
                    const json& resolved) {
  json manifest;
  manifest["tool"] = "smoothwalk";
  manifest["version"] = sw_version();
  manifest["command"] = command;
  manifest["created_utc"] = utc_timestamp();
  manifest["args"] = args_without_out(args);
  manifest["parameters"] = resolved;
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  if (!out) fail("cannot write manifest in " + out_dir);
  out << manifest.dump(2) << "\n";
}

struct GraphHandle {
  sw_graph* g = nullptr;
  ~GraphHandle() { sw_graph_free(g); }
};

struct OracleHandle {
  sw_oracle* o = nullptr;
  ~OracleHandle() { sw_oracle_free(o); }
};

struct EmbeddingsHandle {
  sw_embeddings* e = nullptr;
  ~EmbeddingsHandle() { sw_embeddings_free(e); }
};

sw_graph* load_graph(const std::string& path) {
  sw_graph* g = nullptr;
  check(sw_graph_load(path.c_str(), &g), "loading " + path);
  return g;
}

void ensure_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) {
    std::cerr << "smoothwalk: --out is required\n";
    std::exit(1);
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "smoothwalk: cannot create " << out_dir << ": "
              << ec.message() << "\n";
    std::exit(1);
  }
}

json walk_json(const sw_walk_params& w) {
  json j;
  j["walks_per_node"] = w.walks_per_node;
  j["walk_length"] = w.walk_length;
  j["window"] = w.window;
  j["seed"] = w.seed;
  j["node2vec"] = w.node2vec != 0;
  j["p"] = w.p;
  j["q"] = w.q;
  return j;
}

// Shared walk flags. The node2vec bias switches on when either p or q is
// given explicitly.
struct WalkFlags {
  sw_walk_params params;
  CLI::Option* p_opt = nullptr;
  CLI::Option* q_opt = nullptr;

  void attach(CLI::App& app) {
    sw_walk_params_init(&params);
    app.add_option("--walk-length", params.walk_length, "Walk length")
        ->capture_default_str();
    app.add_option("--walks-per-node", params.walks_per_node,
                   "Walks started per node")
        ->capture_default_str();
    app.add_option("--window", params.window, "Skip-gram window radius")
        ->capture_default_str();
    p_opt = app.add_option("--node2vec-p", params.p,
                           "node2vec return parameter (enables bias)");
    q_opt = app.add_option("--node2vec-q", params.q,
                           "node2vec in-out parameter (enables bias)");
  }

  void finalize() {
    if ((p_opt && p_opt->count()) || (q_opt && q_opt->count()))
      params.node2vec = 1;
  }
};

int run_synth(const std::string& out_dir, std::uint32_t nodes,
              std::uint32_t attach, std::uint64_t seed, double hub_fraction,
              std::uint64_t densify_edges,
              const std::vector<std::string>& args) {
  ensure_out_dir(out_dir);
  GraphHandle base;
  check(sw_graph_synth_scale_free(nodes, attach, seed, &base.g),
        "generating scale-free graph");
  sw_graph* final_graph = base.g;
  GraphHandle densified;
  if (densify_edges > 0) {
    check(sw_graph_densify(base.g, hub_fraction, densify_edges, seed,
                           &densified.g),
          "densifying neighborhoods");
    final_graph = densified.g;
  }
  const std::string graph_path = (fs::path(out_dir) / "graph.txt").string();
  check(sw_graph_save(final_graph, graph_path.c_str()), "saving graph");
  double cc = 0.0;
  check(sw_graph_clustering(final_graph, &cc), "clustering coefficient");

  json resolved;
  resolved["nodes"] = nodes;
  resolved["attach"] = attach;
  resolved["seed"] = seed;
  resolved["densify_hub_fraction"] = hub_fraction;
  resolved["densify_edges"] = densify_edges;
  resolved["edges"] = sw_graph_edges(final_graph);
  resolved["clustering"] = cc;
  write_manifest(out_dir, "synth", args, resolved);

  std::printf("synth: n=%u m=%llu cc=%.4f -> %s\n",
              sw_graph_nodes(final_graph),
              static_cast<unsigned long long>(sw_graph_edges(final_graph)), cc,
              graph_path.c_str());
  return 0;
}

int run_walk(const std::string& out_dir, const std::string& graph_path,
             WalkFlags& walk, std::uint32_t threads,
             const std::vector<std::string>& args) {
  walk.finalize();
  ensure_out_dir(out_dir);
  GraphHandle graph;
  graph.g = load_graph(graph_path);
  const std::string walks_path = (fs::path(out_dir) / "walks.txt").string();
  check(sw_walks_write(graph.g, &walk.params, walks_path.c_str(), threads),
        "writing walks");

  json resolved;
  resolved["graph"] = graph_path;
  resolved["walk"] = walk_json(walk.params);
  resolved["threads"] = threads;
  write_manifest(out_dir, "walk", args, resolved);
  std::printf("walk: %u nodes x %u walks -> %s\n", sw_graph_nodes(graph.g),
              walk.params.walks_per_node, walks_path.c_str());
  return 0;
}

std::uint64_t resolve_budget(sw_graph* g, const sw_walk_params& walk,
                             std::uint64_t budget, double budget_fraction,
                             std::uint64_t* estimated_out) {
  if (budget > 0) return budget;
  std::uint64_t estimated = 0;
  check(sw_corpus_unique_pairs(g, &walk, &estimated),
        "estimating unique pairs");
  if (estimated_out) *estimated_out = estimated;
  const auto derived = static_cast<std::uint64_t>(
      budget_fraction * static_cast<double>(estimated));
  return derived > 0 ? derived : 1;
}

int run_sketch(const std::string& out_dir, const std::string& graph_path,
               WalkFlags& walk, std::uint64_t budget, double budget_fraction,
               std::uint64_t seed, const std::vector<std::string>& args) {
  walk.finalize();
  walk.params.seed = seed;
  ensure_out_dir(out_dir);
  GraphHandle graph;
  graph.g = load_graph(graph_path);

  std::uint64_t estimated = 0;
  const std::uint64_t resolved_budget = resolve_budget(
      graph.g, walk.params, budget, budget_fraction, &estimated);

  OracleHandle oracle;
  check(sw_oracle_build(graph.g, &walk.params, resolved_budget, &oracle.o),
        "building sketch");
  const std::string oracle_path = (fs::path(out_dir) / "oracle.txt").string();
  check(sw_oracle_save(oracle.o, oracle_path.c_str()), "saving oracle");

  json resolved;
  resolved["graph"] = graph_path;
  resolved["walk"] = walk_json(walk.params);
  resolved["budget"] = resolved_budget;
  resolved["budget_fraction"] = budget_fraction;
  resolved["estimated_unique_pairs"] = estimated;
  write_manifest(out_dir, "sketch", args, resolved);

  std::printf("sketch: M=%llu b=%llu stored=%llu default_w=%.3f -> %s\n",
              static_cast<unsigned long long>(sw_oracle_total_pairs(oracle.o)),
              static_cast<unsigned long long>(resolved_budget),
              static_cast<unsigned long long>(sw_oracle_stored(oracle.o)),
              sw_oracle_default_weight(oracle.o), oracle_path.c_str());
  return 0;
}

struct TrainFlags {
  sw_train_params params;
  std::string optimizer = "adam";

  void attach(CLI::App& app) {
    sw_train_params_init(&params);
    app.add_option("--dim", params.dim, "Embedding dimension")
        ->capture_default_str();
    app.add_option("--negatives", params.negatives,
                   "Negative samples per positive pair")
        ->capture_default_str();
    app.add_option("--neg-alpha", params.neg_alpha,
                   "Negative distribution exponent")
        ->capture_default_str();
    app.add_option("--optimizer", optimizer, "adam or sgd")
        ->check(CLI::IsMember({"adam", "sgd"}))
        ->capture_default_str();
    app.add_option("--lr", params.learning_rate, "Learning rate")
        ->capture_default_str();
    app.add_option("--batch-size", params.batch_size,
                   "Positive pairs per batch")
        ->capture_default_str();
    app.add_option("--beta", params.beta,
                   "Smoothing exponent in (0,1]; default picks by "
                   "clustering coefficient");
    app.add_option("--budget", params.budget,
                   "Sketch budget in pairs (overrides --budget-frac)");
    app.add_option("--budget-frac", params.budget_fraction,
                   "Sketch budget as a fraction of the unique pair count")
        ->capture_default_str();
  }

  void finalize(std::uint64_t seed) {
    params.use_adam = optimizer == "adam" ? 1 : 0;
    params.sampler_seed = seed;
    params.train_seed = seed;
  }
};

int run_train(const std::string& out_dir, const std::string& graph_path,
              WalkFlags& walk, TrainFlags& train,
              const std::string& oracle_path, std::uint64_t seed,
              const std::vector<std::string>& args) {
  walk.finalize();
  walk.params.seed = seed;
  train.finalize(seed);
  ensure_out_dir(out_dir);

  GraphHandle graph;
  graph.g = load_graph(graph_path);

  OracleHandle oracle;
  if (!oracle_path.empty())
    check(sw_oracle_load(oracle_path.c_str(), &oracle.o),
          "loading oracle " + oracle_path);

  const std::string pass_csv =
      (fs::path(out_dir) / "sample_stats.csv").string();
  sw_train_stats stats{};
  EmbeddingsHandle emb;
  check(sw_train(graph.g, &walk.params, &train.params, oracle.o,
                 pass_csv.c_str(), &stats, &emb.e),
        "training");

  const std::string emb_path = (fs::path(out_dir) / "embeddings.txt").string();
  check(sw_embeddings_export(emb.e, graph.g, emb_path.c_str()),
        "exporting embeddings");
  const std::string map_path = (fs::path(out_dir) / "id_map.txt").string();
  check(sw_graph_save_id_map(graph.g, map_path.c_str()), "saving id map");

  json resolved;
  resolved["graph"] = graph_path;
  resolved["walk"] = walk_json(walk.params);
  resolved["dim"] = train.params.dim;
  resolved["negatives"] = train.params.negatives;
  resolved["neg_alpha"] = train.params.neg_alpha;
  resolved["optimizer"] = train.optimizer;
  resolved["learning_rate"] = train.params.learning_rate;
  resolved["batch_size"] = train.params.batch_size;
  resolved["beta"] = stats.beta;
  resolved["budget"] = stats.budget;
  resolved["seed"] = seed;
  resolved["oracle"] = oracle_path;
  write_manifest(out_dir, "train", args, resolved);

  std::printf(
      "train: beta=%.3f budget=%llu passes=%u accepted=%llu rejected=%llu "
      "-> %s\n",
      stats.beta, static_cast<unsigned long long>(stats.budget), stats.passes,
      static_cast<unsigned long long>(stats.accepted),
      static_cast<unsigned long long>(stats.rejected), emb_path.c_str());
  return 0;
}

int run_analyze(const std::string& out_dir, const std::string& graph_path,
                WalkFlags& walk, std::vector<double> betas,
                double budget_fraction, std::uint32_t negatives,
                double neg_alpha, std::uint64_t seed,
                const std::vector<std::string>& args) {
  walk.finalize();
  walk.params.seed = seed;
  ensure_out_dir(out_dir);
  GraphHandle graph;
  graph.g = load_graph(graph_path);

  sw_analyze_params params;
  sw_analyze_params_init(&params);
  params.walk = walk.params;
  params.betas = betas.data();
  params.beta_count = betas.size();
  params.budget_fraction = budget_fraction;
  params.negatives = negatives;
  params.neg_alpha = neg_alpha;
  params.seed = seed;
  check(sw_analyze(graph.g, &params, out_dir.c_str()), "analysis");

  json resolved;
  resolved["graph"] = graph_path;
  resolved["walk"] = walk_json(walk.params);
  resolved["betas"] = betas;
  resolved["budget_fraction"] = budget_fraction;
  resolved["negatives"] = negatives;
  resolved["neg_alpha"] = neg_alpha;
  resolved["seed"] = seed;
  write_manifest(out_dir, "analyze", args, resolved);
  std::printf("analyze: %zu beta values -> %s\n", betas.size(),
              out_dir.c_str());
  return 0;
}

int run_eval(const std::string& out_dir, const std::string& graph_path,
             WalkFlags& walk, TrainFlags& train, std::vector<double> betas,
             std::vector<std::uint32_t> k_values, double candidate_fraction,
             std::uint32_t repetitions, double split_fraction,
             bool retrain_per_trial, std::uint32_t threads, std::uint64_t seed,
             const std::vector<std::string>& args) {
  walk.finalize();
  walk.params.seed = seed;
  train.finalize(seed);
  ensure_out_dir(out_dir);
  GraphHandle graph;
  graph.g = load_graph(graph_path);

  sw_eval_params params;
  sw_eval_params_init(&params);
  params.walk = walk.params;
  params.train = train.params;
  params.k_values = k_values.data();
  params.k_count = k_values.size();
  params.candidate_fraction = candidate_fraction;
  params.repetitions = repetitions;
  params.split_fraction = split_fraction;
  params.retrain_per_trial = retrain_per_trial ? 1 : 0;
  params.threads = threads;
  params.seed = seed;

  const std::string scores = (fs::path(out_dir) / "scores.csv").string();
  const std::string ttests = (fs::path(out_dir) / "ttests.csv").string();
  check(sw_eval(graph.g, &params, betas.data(), betas.size(), scores.c_str(),
                betas.size() > 1 ? ttests.c_str() : nullptr),
        "evaluation");

  json resolved;
  resolved["graph"] = graph_path;
  resolved["walk"] = walk_json(walk.params);
  resolved["betas"] = betas;
  resolved["k_values"] = k_values;
  resolved["candidate_fraction"] = candidate_fraction;
  resolved["repetitions"] = repetitions;
  resolved["split_fraction"] = split_fraction;
  resolved["retrain_per_trial"] = retrain_per_trial;
  resolved["threads"] = threads;
  resolved["seed"] = seed;
  write_manifest(out_dir, "eval", args, resolved);
  std::printf("eval: %zu methods x %u reps -> %s\n", betas.size(), repetitions,
              scores.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> raw_args(argv + 1, argv + argc);

  // Replay mode: take the stored argument list, then apply this run's
  // --out on top.
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    if (raw_args[i] != "--from-manifest") continue;
    if (i + 1 >= raw_args.size()) {
      std::cerr << "smoothwalk: --from-manifest needs a file\n";
      return 1;
    }
    std::ifstream in(raw_args[i + 1]);
    if (!in) {
      std::cerr << "smoothwalk: cannot open manifest " << raw_args[i + 1]
                << "\n";
      return 1;
    }
    json manifest;
    try {
      in >> manifest;
    } catch (const std::exception& e) {
      std::cerr << "smoothwalk: bad manifest: " << e.what() << "\n";
      return 1;
    }
    std::vector<std::string> replay =
        manifest.at("args").get<std::vector<std::string>>();
    for (std::size_t j = 0; j < raw_args.size(); ++j) {
      if (j == i || j == i + 1) continue;
      replay.push_back(raw_args[j]);
    }
    raw_args = std::move(replay);
    break;
  }

  CLI::App app{"Random-walk node embeddings with smoothed positive-pair "
               "sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sw_version());

  std::string out_dir;
  std::string graph_path;
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic graph");
  std::uint32_t synth_nodes = 2000, synth_attach = 3;
  double synth_hub_fraction = 0.25;
  std::uint64_t synth_densify_edges = 0;
  synth->add_option("--nodes", synth_nodes, "Node count")
      ->capture_default_str();
  synth->add_option("--attach", synth_attach, "Edges added per new node")
      ->capture_default_str();
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();
  synth->add_option("--densify-hub-frac", synth_hub_fraction,
                    "Top-degree fraction used for densification")
      ->capture_default_str();
  synth->add_option("--densify-edges", synth_densify_edges,
                    "Extra edges among hub neighbors (0 = none)")
      ->capture_default_str();
  synth->add_option("--out", out_dir, "Output directory")->required();

  // walk
  auto* walk_cmd = app.add_subcommand("walk", "Dump the walk corpus");
  WalkFlags walk_walk;
  walk_cmd->add_option("--graph", graph_path, "Edge list file")->required();
  walk_walk.attach(*walk_cmd);
  walk_cmd->add_option("--seed", walk_walk.params.seed, "Random seed")
      ->capture_default_str();
  walk_cmd->add_option("--threads", threads, "Worker threads")
      ->capture_default_str();
  walk_cmd->add_option("--out", out_dir, "Output directory")->required();

  // sketch
  auto* sketch_cmd =
      app.add_subcommand("sketch", "Build the pair-frequency oracle");
  WalkFlags sketch_walk;
  std::uint64_t sketch_budget = 0;
  double sketch_budget_fraction = 0.10;
  sketch_cmd->add_option("--graph", graph_path, "Edge list file")->required();
  sketch_walk.attach(*sketch_cmd);
  sketch_cmd->add_option("--budget", sketch_budget,
                         "Sketch budget in pairs (overrides --budget-frac)");
  sketch_cmd
      ->add_option("--budget-frac", sketch_budget_fraction,
                   "Budget as a fraction of the unique pair count")
      ->capture_default_str();
  sketch_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  sketch_cmd->add_option("--out", out_dir, "Output directory")->required();

  // train
  auto* train_cmd = app.add_subcommand(
      "train", "Walks, sketch, smooth sampling and SGNS in one run");
  WalkFlags train_walk;
  TrainFlags train_train;
  std::string train_oracle;
  train_cmd->add_option("--graph", graph_path, "Edge list file")->required();
  train_walk.attach(*train_cmd);
  train_train.attach(*train_cmd);
  train_cmd->add_option("--oracle", train_oracle,
                        "Reuse a saved oracle (skips the sketch passes)");
  train_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--threads", threads, "Worker threads")
      ->capture_default_str();
  train_cmd->add_option("--out", out_dir, "Output directory")->required();

  // analyze
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Corpus skew and smoothing diagnostics");
  WalkFlags analyze_walk;
  std::vector<double> analyze_betas{0.5, 0.75, 1.0};
  double analyze_budget_fraction = 0.10;
  std::uint32_t analyze_negatives = 5;
  double analyze_neg_alpha = 0.75;
  analyze_cmd
      ->add_option("--corpus-from,--graph", graph_path,
                   "Edge list defining the corpus")
      ->required();
  analyze_walk.attach(*analyze_cmd);
  analyze_cmd->add_option("--betas", analyze_betas, "Beta values")
      ->delimiter(',')
      ->capture_default_str();
  analyze_cmd
      ->add_option("--budget-frac", analyze_budget_fraction,
                   "Sketch budget fraction for the significance table")
      ->capture_default_str();
  analyze_cmd->add_option("--negatives", analyze_negatives,
                          "Negative samples per positive")
      ->capture_default_str();
  analyze_cmd->add_option("--neg-alpha", analyze_neg_alpha,
                          "Negative distribution exponent")
      ->capture_default_str();
  analyze_cmd->add_option("--seed", seed, "Random seed")
      ->capture_default_str();
  analyze_cmd->add_option("--out", out_dir, "Output directory")->required();

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "Link-prediction experiment protocol");
  WalkFlags eval_walk;
  TrainFlags eval_train;
  std::vector<double> eval_betas{0.5, 1.0};
  std::vector<std::uint32_t> eval_k{100};
  double eval_candidate_fraction = 0.001;
  std::uint32_t eval_reps = 100;
  double eval_split_fraction = 0.2;
  bool eval_retrain = false;
  eval_cmd->add_option("--graph", graph_path, "Edge list file")->required();
  eval_walk.attach(*eval_cmd);
  eval_train.attach(*eval_cmd);
  eval_cmd->add_option("--betas", eval_betas, "Beta values to compare")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--k-values", eval_k, "Ranking cutoffs")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd
      ->add_option("--candidate-frac", eval_candidate_fraction,
                   "Fraction of node pairs (and removed edges) sampled")
      ->capture_default_str();
  eval_cmd->add_option("--reps", eval_reps, "Candidate-sampling repetitions")
      ->capture_default_str();
  eval_cmd
      ->add_option("--split-frac", eval_split_fraction,
                   "Fraction of edges removed for the split")
      ->capture_default_str();
  eval_cmd->add_flag("--retrain-per-trial", eval_retrain,
                     "Retrain the embedding for every repetition");
  eval_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  eval_cmd->add_option("--threads", threads, "Worker threads")
      ->capture_default_str();
  eval_cmd->add_option("--out", out_dir, "Output directory")->required();

  try {
    std::vector<std::string> reversed(raw_args.rbegin(), raw_args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth->parsed())
      return run_synth(out_dir, synth_nodes, synth_attach, seed,
                       synth_hub_fraction, synth_densify_edges, raw_args);
    if (walk_cmd->parsed())
      return run_walk(out_dir, graph_path, walk_walk, threads, raw_args);
    if (sketch_cmd->parsed())
      return run_sketch(out_dir, graph_path, sketch_walk, sketch_budget,
                        sketch_budget_fraction, seed, raw_args);
    if (train_cmd->parsed())
      return run_train(out_dir, graph_path, train_walk, train_train,
                       train_oracle, seed, raw_args);
    if (analyze_cmd->parsed())
      return run_analyze(out_dir, graph_path, analyze_walk, analyze_betas,
                         analyze_budget_fraction, analyze_negatives,
                         analyze_neg_alpha, seed, raw_args);
    if (eval_cmd->parsed())
      return run_eval(out_dir, graph_path, eval_walk, eval_train, eval_betas,
                      eval_k, eval_candidate_fraction, eval_reps,
                      eval_split_fraction, eval_retrain, threads, seed,
                      raw_args);
  } catch (const std::exception& e) {
    std::cerr << "smoothwalk: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
