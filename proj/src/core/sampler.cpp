#include "core/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace smoothwalk {

double accept_probability(double freq, double beta) {
  if (freq < 1.0) throw std::invalid_argument("frequency must be >= 1");
  if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
  const double p = std::pow(freq, beta - 1.0);
  return p < 1.0 ? p : 1.0;
}

SmoothedMass m_beta(std::span<const std::uint64_t> counts, double beta) {
  if (counts.empty()) throw std::invalid_argument("empty frequency table");
  SmoothedMass out;
  std::uint64_t total = 0;
  if (beta == 1.0) {
    for (auto c : counts) total += c;
    out.m_beta = static_cast<double>(total);
    out.t_beta = 1;
    return out;
  }
  for (auto c : counts) {
    total += c;
    out.m_beta += std::pow(static_cast<double>(c), beta);
  }
  const double ratio = static_cast<double>(total) / out.m_beta;
  out.t_beta = static_cast<std::uint64_t>(std::ceil(ratio - 1e-12));
  if (out.t_beta < 1) out.t_beta = 1;
  return out;
}

SmoothedMass m_beta(const FrequencyTable& counts, double beta) {
  return m_beta(counts.sorted_counts(), beta);
}

namespace {

SampleStats run_sampler(const PairSource& corpus, const FrequencySource& freqs,
                        const SamplerConfig& cfg, const PairSink& sink,
                        double probability_scale) {
  if (cfg.target < 1) throw std::invalid_argument("sampler target must be >= 1");
  if (corpus.pair_count() == 0) throw std::invalid_argument("corpus is empty");

  Rng rng(mix_seed(cfg.seed, seed_tag::kSampler));
  SampleStats stats;
  // Probabilities repeat per distinct frequency value; memoize the pow().
  std::unordered_map<double, double> prob_cache;

  while (stats.accepted < cfg.target) {
    ++stats.passes;
    PassCounts pass{stats.passes, 0, 0};
    const std::uint64_t visited = corpus.scan([&](NodeId u, NodeId v) {
      const double f = freqs.frequency(u, v);
      double pr;
      if (cfg.beta == 1.0 && probability_scale == 1.0) {
        pr = 1.0;
      } else if (auto it = prob_cache.find(f); it != prob_cache.end()) {
        pr = it->second;
      } else {
        if (f < 1.0)
          throw StateError("frequency estimate below 1 for pair (" +
                           std::to_string(u) + ", " + std::to_string(v) + ")");
        if (probability_scale != 1.0 && f > cfg.upper_bound)
          throw StateError("pair (" + std::to_string(u) + ", " +
                           std::to_string(v) + ") has estimate " +
                           std::to_string(f) + " above upper bound " +
                           std::to_string(cfg.upper_bound));
        pr = std::pow(f, cfg.beta - 1.0) * probability_scale;
        if (pr > 1.0) pr = 1.0;
        prob_cache.emplace(f, pr);
      }
      if (pr >= 1.0 || rng.next_double() < pr) {
        sink(u, v);
        ++pass.accepted;
        ++stats.accepted;
      } else {
        ++pass.rejected;
      }
      return stats.accepted < cfg.target;
    });
    stats.consumed += visited;
    stats.rejected += pass.rejected;
    stats.per_pass.push_back(pass);
  }
  return stats;
}

}  // namespace

SampleStats smooth_stream(const PairSource& corpus,
                          const FrequencySource& freqs,
                          const SamplerConfig& cfg, const PairSink& sink) {
  if (cfg.beta <= 0.0 || cfg.beta > 1.0)
    throw std::invalid_argument("smooth_stream requires beta in (0, 1]");
  return run_sampler(corpus, freqs, cfg, sink, 1.0);
}

SampleStats unsmooth_stream(const PairSource& corpus,
                            const FrequencySource& freqs,
                            const SamplerConfig& cfg, const PairSink& sink) {
  if (cfg.beta <= 1.0)
    throw std::invalid_argument("unsmooth_stream requires beta > 1");
  if (cfg.upper_bound < 1.0)
    throw std::invalid_argument("unsmooth_stream requires an upper bound >= 1");
  const double scale = std::pow(cfg.upper_bound, 1.0 - cfg.beta);
  return run_sampler(corpus, freqs, cfg, sink, scale);
}

}  // namespace smoothwalk
