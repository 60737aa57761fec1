#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "steinlab/constants.hpp"
#include "steinlab/quadrature.hpp"

namespace steinlab {

// The kernel quantities here follow the literal weights alpha_i = i^(-beta):
// r(m) below is the unnormalized inner series and d, h are taken with
// c_beta, whatever params.normalize_weights says.

/// r(m) = sum_{i>=1} i^(-beta) (i+m)^(-beta) for m = 0..max_lag, each with
/// a certified remainder.
class InnerSeriesTable {
 public:
  InnerSeriesTable(double beta, std::size_t max_lag);

  double beta() const { return beta_; }
  std::size_t max_lag() const { return values_.size() - 1; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t m) const { return values_[m]; }
  /// Largest remainder bound over the table.
  double max_error() const { return max_error_; }

 private:
  double beta_;
  std::vector<double> values_;
  double max_error_ = 0.0;
};

struct KernelError {
  std::size_t N = 0;
  double g_norm_sq = 0.0;
  double inner = 0.0;
  /// h^-2 (q!)^-2 |g_N|^2 - 2 h^-1 (q!)^-1 <g_N, g> + 1/q!
  double err_sq = 0.0;
  double theoretical_exponent = 0.0;  // 2 beta q - q - 1
};

/// N^(2 beta q - q - 2) sum_{n,k<=N} r(|n - k|)^q.
double g_norm_sq(const ModelParams& params, const InnerSeriesTable& r, std::size_t N);
double g_norm_sq(const ModelParams& params, std::size_t N);

/// 2 d N^(2 beta q - q - 2) sum_{l=1}^{N} (N - l) r(l)^q.
double g_inner(const ModelParams& params, const InnerSeriesTable& r, std::size_t N);
double g_inner(const ModelParams& params, std::size_t N);

/// <g_N, g> from the kernels themselves: the y-integrals are done in closed
/// form and the remaining u-integral by adaptive Gauss-Legendre on unit
/// cells.  The weight sum is cut at `direct_terms` and the rest replaced by
/// a midpoint-shifted integral.  N <= 32.
double g_inner_quad(const ModelParams& params, std::size_t N, const QuadratureOptions& opts = {},
                    std::size_t direct_terms = 2048);

KernelError kernel_error(const ModelParams& params, const InnerSeriesTable& r, std::size_t N);
KernelError kernel_error(const ModelParams& params, std::size_t N);

/// h^-2 (1/q!) N^(2 beta q - q - 2) sum_{n,m<=N} r(|n - m|)^q.
double renorm_second_moment(const ModelParams& params, const InnerSeriesTable& r, std::size_t N);
double renorm_second_moment(const ModelParams& params, std::size_t N);

struct SurrogateOptions {
  unsigned threads = 1;
  std::size_t trunc_factor = 64;  // M = trunc_factor * N_ref
};

/// `reps` draws of z_nclt at horizon N_ref (replicate r uses stream
/// (seed, r)); an approximate sample of the Hermite limit law.
std::vector<double> hermite_surrogate_sample(const ModelParams& params, std::size_t N_ref,
                                             std::size_t reps, std::uint64_t seed,
                                             const SurrogateOptions& opts = {});

}  // namespace steinlab
