#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/freq.hpp"

namespace smoothwalk {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// For each percentage k, the fraction of all pair occurrences contributed
// by the ceil(k% * P) most frequent pairs.
std::vector<double> top_mass_fraction(const FrequencyTable& table,
                                      std::span<const double> percents);

// Zipf exponent: negated least-squares slope of log(count) over log(rank),
// fitted over the full rank range. Requires at least 10 unique pairs;
// returns 0 when all counts are equal.
double fit_zipf(const FrequencyTable& table);

// Smallest rank j (1-based) whose smoothed frequency t_beta * f_j^beta
// strictly exceeds f_j; nullopt if no rank qualifies (always for beta = 1).
std::optional<std::uint64_t> transition_rank_empirical(
    const FrequencyTable& table, double beta);

enum class TransitionRegime { kConstant, kSublinear, kLinear, kBoundary };

struct TransitionPrediction {
  TransitionRegime regime = TransitionRegime::kBoundary;
  std::optional<double> rank;  // only for the sublinear regime
};

TransitionPrediction transition_rank_predicted(double z, double beta,
                                               std::uint64_t unique_pairs);

const char* transition_regime_name(TransitionRegime regime);

// P(X >= successes) for X ~ Binomial(trials, prob), computed exactly.
double binomial_tail_geq(std::uint64_t trials, std::uint64_t successes,
                         double prob);

// Fraction of pairs whose positive count is significantly above twice the
// negative count: one-sided exact binomial test with success probability
// 2/3 at the given level. Every pair must have pos + neg >= 1.
double significant_fraction(std::span<const std::uint64_t> pos,
                            std::span<const std::uint64_t> neg, double level);

}  // namespace smoothwalk
