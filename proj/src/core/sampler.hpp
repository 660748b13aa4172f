#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core/freq.hpp"
#include "core/stream.hpp"
#include "core/types.hpp"

namespace smoothwalk {

struct SamplerConfig {
  double beta = 1.0;
  std::uint64_t target = 0;   // pairs to emit (M)
  std::uint64_t seed = 1;
  double upper_bound = 0.0;   // frequency bound, required for beta > 1
};

struct PassCounts {
  std::uint32_t pass = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

struct SampleStats {
  std::uint32_t passes = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t consumed = 0;  // pairs read from the corpus
  std::vector<PassCounts> per_pass;
};

// min(freq^(beta-1), 1). freq must be >= 1.
double accept_probability(double freq, double beta);

struct SmoothedMass {
  double m_beta = 0.0;       // sum of count^beta over unique pairs
  std::uint64_t t_beta = 1;  // ceil(M / m_beta), expected pass count
};

SmoothedMass m_beta(std::span<const std::uint64_t> counts, double beta);
SmoothedMass m_beta(const FrequencyTable& counts, double beta);

// Replays the corpus, accepting each pair with probability
// freq^(beta-1), until exactly cfg.target pairs have been emitted. The
// final pass is truncated mid-stream as soon as the target is reached.
// Acceptance randomness depends only on cfg.seed, so one corpus can be
// resampled at several beta values without regenerating walks.
SampleStats smooth_stream(const PairSource& corpus,
                          const FrequencySource& freqs,
                          const SamplerConfig& cfg, const PairSink& sink);

// beta > 1 variant: acceptance probability freq^(beta-1) / U^(beta-1)
// with U = cfg.upper_bound. Fails fast if any estimate exceeds U.
SampleStats unsmooth_stream(const PairSource& corpus,
                            const FrequencySource& freqs,
                            const SamplerConfig& cfg, const PairSink& sink);

}  // namespace smoothwalk
