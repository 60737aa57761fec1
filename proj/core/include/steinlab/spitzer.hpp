#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "steinlab/constants.hpp"

namespace steinlab {

/// A series sum_{N>=1} a_N split at n_terms: the exact partial sum, an
/// estimate of the rest and a bound on the error of that estimate.
struct SeriesValue {
  double epsilon = 0.0;
  double partial_sum = 0.0;
  double tail_estimate = 0.0;
  double tail_remainder_bound = 0.0;
  std::uint64_t n_terms = 0;
  /// Smallest nonzero probability the tail law can express (1/sample size
  /// for an empirical law, 0 for the Gaussian).
  double probability_floor = 0.0;

  double value() const { return partial_sum + tail_estimate; }
};

/// sum_N (1/N) 2 (1 - Phi(eps sqrt(N) / sigma)).
SeriesValue f1_hat(const ModelParams& params, double sigma, double eps, std::uint64_t N_max);

/// sum_N 2 (1 - Phi(eps sqrt(N) / sigma)).
SeriesValue g1_hat(const ModelParams& params, double sigma, double eps, std::uint64_t N_max);

/// sum_N (1/N) P(|Z| > eps h^-1 N^a),  a = 1 + q/2 - beta q, with P the
/// empirical law of `surrogate` (at least 10^4 draws).  Under the empirical
/// law the series is a finite sum, so the part beyond N_max is exact.
SeriesValue f2_hat(const ModelParams& params, std::span<const double> surrogate, double eps,
                   std::uint64_t N_max);

/// sum_N P(|Z| > eps h^-1 N^a), same conventions as f2_hat.
SeriesValue g2_hat(const ModelParams& params, std::span<const double> surrogate, double eps,
                   std::uint64_t N_max);

/// Limit of -f/log(eps): 2 in the CLT regime, 1/a in the NCLT regime.
double spitzer_limit(const ModelParams& params);

/// 1 + q/2 - beta q.
double nclt_growth_exponent(const ModelParams& params);

}  // namespace steinlab
