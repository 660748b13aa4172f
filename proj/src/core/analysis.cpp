#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/sampler.hpp"

namespace smoothwalk {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("need at least two points to fit");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate x values");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

std::vector<double> top_mass_fraction(const FrequencyTable& table,
                                      std::span<const double> percents) {
  const auto counts = table.sorted_counts();
  if (counts.empty()) throw std::invalid_argument("empty frequency table");
  std::vector<double> out;
  out.reserve(percents.size());
  const double p_count = static_cast<double>(counts.size());
  for (double percent : percents) {
    if (percent <= 0.0 || percent > 100.0)
      throw std::invalid_argument("percent must be in (0, 100]");
    const auto take = static_cast<std::uint64_t>(
        std::ceil(percent / 100.0 * p_count));
    std::uint64_t mass = 0;
    for (std::uint64_t i = 0; i < take && i < counts.size(); ++i)
      mass += counts[i];
    out.push_back(static_cast<double>(mass) /
                  static_cast<double>(table.total()));
  }
  return out;
}

double fit_zipf(const FrequencyTable& table) {
  const auto counts = table.sorted_counts();
  if (counts.size() < 10)
    throw std::invalid_argument("need at least 10 unique pairs");
  if (counts.front() == counts.back()) return 0.0;
  std::vector<double> log_rank(counts.size()), log_count(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    log_rank[i] = std::log(static_cast<double>(i + 1));
    log_count[i] = std::log(static_cast<double>(counts[i]));
  }
  return -least_squares(log_rank, log_count).slope;
}

std::optional<std::uint64_t> transition_rank_empirical(
    const FrequencyTable& table, double beta) {
  if (beta <= 0.0 || beta > 1.0)
    throw std::invalid_argument("beta must be in (0, 1]");
  const auto counts = table.sorted_counts();
  if (counts.empty()) throw std::invalid_argument("empty frequency table");
  const auto mass = m_beta(counts, beta);
  const double t = static_cast<double>(mass.t_beta);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double f = static_cast<double>(counts[i]);
    if (t * std::pow(f, beta) > f) return i + 1;
  }
  return std::nullopt;
}

TransitionPrediction transition_rank_predicted(double z, double beta,
                                               std::uint64_t unique_pairs) {
  if (z < 0.0) throw std::invalid_argument("z must be >= 0");
  if (beta <= 0.0 || beta > 1.0)
    throw std::invalid_argument("beta must be in (0, 1]");
  TransitionPrediction out;
  const double bz = beta * z;
  if (z == 1.0 || bz == 1.0) {
    out.regime = TransitionRegime::kBoundary;
    return out;
  }
  if (z < 1.0) {
    out.regime = TransitionRegime::kLinear;
    return out;
  }
  if (bz > 1.0) {
    out.regime = TransitionRegime::kConstant;
    return out;
  }
  out.regime = TransitionRegime::kSublinear;
  out.rank = std::pow(static_cast<double>(unique_pairs),
                      (1.0 - bz) / (z - bz));
  return out;
}

const char* transition_regime_name(TransitionRegime regime) {
  switch (regime) {
    case TransitionRegime::kConstant:
      return "constant";
    case TransitionRegime::kSublinear:
      return "sublinear";
    case TransitionRegime::kLinear:
      return "linear";
    case TransitionRegime::kBoundary:
      return "boundary";
  }
  return "unknown";
}

double binomial_tail_geq(std::uint64_t trials, std::uint64_t successes,
                         double prob) {
  if (prob <= 0.0 || prob >= 1.0)
    throw std::invalid_argument("prob must be in (0, 1)");
  if (successes == 0) return 1.0;
  if (successes > trials) return 0.0;

  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(successes);
  // log of the first term, then the rest via term ratios.
  double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0) + k * std::log(prob) +
                    (n - k) * std::log1p(-prob);
  const double odds = prob / (1.0 - prob);
  double rel_sum = 1.0;
  double cur = 1.0;
  for (std::uint64_t i = successes; i < trials; ++i) {
    cur *= (static_cast<double>(trials - i) / static_cast<double>(i + 1)) *
           odds;
    rel_sum += cur;
    if (rel_sum > 1e250) {
      // Ratio terms dominate the first one by >250 orders of magnitude,
      // which only happens when the tail covers essentially all the mass.
      return 1.0;
    }
  }
  const double log_p = log_term + std::log(rel_sum);
  return log_p >= 0.0 ? 1.0 : std::exp(log_p);
}

double significant_fraction(std::span<const std::uint64_t> pos,
                            std::span<const std::uint64_t> neg, double level) {
  if (pos.size() != neg.size())
    throw std::invalid_argument("pos/neg size mismatch");
  if (pos.empty()) throw std::invalid_argument("no pairs to test");
  std::uint64_t significant = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const std::uint64_t n = pos[i] + neg[i];
    if (n == 0) throw std::invalid_argument("pair with no observations");
    if (binomial_tail_geq(n, pos[i], 2.0 / 3.0) <= level) ++significant;
  }
  return static_cast<double>(significant) / static_cast<double>(pos.size());
}

}  // namespace smoothwalk
