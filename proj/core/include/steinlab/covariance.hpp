#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "steinlab/constants.hpp"

namespace steinlab {

/// (i^(-beta))_{i=1..M}, divided by sqrt(sum_{i<=M} i^(-2 beta)) when
/// params.normalize_weights is set.
std::vector<double> build_weights(const ModelParams& params, std::size_t M);

enum class CovarianceMethod { automatic, direct, fft };

/// Autocovariances rho(0..m_max) of the moving average truncated to M
/// weights.  Immutable once built.
class CovarianceTable {
 public:
  /// `automatic` sums directly while M * (m_max + 1) stays below 2^24 and
  /// switches to an FFT autocorrelation above that.
  static CovarianceTable build(const ModelParams& params, std::size_t M, std::size_t m_max,
                               CovarianceMethod method = CovarianceMethod::automatic);

  double beta() const { return beta_; }
  bool normalize_weights() const { return normalized_; }
  std::size_t trunc_M() const { return weights_.size(); }
  std::size_t m_max() const { return rho_.size() - 1; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> rho() const { return rho_; }

  /// sum_{i<=M} i^(-2 beta), the squared norm of the raw weights.
  double raw_norm_sq() const { return raw_norm_sq_; }
  /// What the raw squared weights were divided by (raw_norm_sq or 1).
  double weight_scale() const { return normalized_ ? raw_norm_sq_ : 1.0; }

  /// Bound on |rho_M(m) - rho(m)| against the untruncated model, at m_max
  /// (the bound grows with m, so this covers every stored lag).
  double tail_bound() const { return ideal_bias_bound(m_max()); }
  double ideal_bias_bound(std::size_t m) const;

  CovarianceMethod method() const { return method_; }

 private:
  double beta_ = 0.0;
  bool normalized_ = true;
  double raw_norm_sq_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> rho_;
  CovarianceMethod method_ = CovarianceMethod::direct;
};

/// Stored rho(m); RangeError beyond m_max.
double rho(const CovarianceTable& cov, std::size_t m);

/// sum_{i=1}^{M-m} alpha_i alpha_{i+m}, summed directly with compensation.
/// Zero for m >= M.
double rho_direct(std::span<const double> weights, std::size_t m);

/// rho(m) m^(2 beta - 1) / cov_constant, which tends to 1 for large m.
double rho_asymptotic_ratio(const CovarianceTable& cov, std::size_t m);

enum class PowerSumVariant {
  partial,  // 1 + n^(alpha+1) dominates sum_{k=1}^{n-1} k^alpha (alpha != -1)
  tail,     // n^(alpha+1) / (-alpha-1) dominates sum_{k>=n} k^alpha (alpha < -1)
};

/// Dominating values for power sums.  "Dominates" is up to a constant that
/// depends on alpha only, not on n.
double power_sum_bound(double alpha, std::size_t n, PowerSumVariant variant);

/// CSV with header m,rho,ideal_bias_bound.
void write_covariance_csv(const CovarianceTable& cov, std::ostream& os);

}  // namespace steinlab
