#pragma once

#include <optional>

#include "steinlab/estimate.hpp"

namespace steinlab {

class CovarianceTable;

/// Hermite rank q and memory exponent beta of the model
///   X_n = sum_{i>=1} alpha_i eps_{n-i},   alpha_i proportional to i^(-beta).
/// With normalize_weights the weights are scaled to unit l2 norm.
struct ModelParams {
  int q = 2;
  double beta = 0.75;
  bool normalize_weights = true;

  /// Throws DomainError unless q >= 1 and 1/2 < beta < 1.
  void validate() const;
  /// q (2 beta - 1); 1 is the regime boundary.
  double regime_index() const { return q * (2.0 * beta - 1.0); }
};

enum class Regime { clt, nclt };
enum class CltBranch { low_beta, high_beta };

struct RegimeInfo {
  Regime regime = Regime::clt;
  std::optional<double> clt_exponent;
  std::optional<CltBranch> clt_branch;
  std::optional<double> nclt_exponent;
  double threshold_q_inverse = 0.0;       // 1 / (2 beta - 1)
  std::optional<double> branch_threshold;  // q / (2q - 2), absent for q = 1
};

struct ConstantSet {
  double c_beta = 0.0;
  Estimate zeta_2beta;
  double cov_constant = 0.0;
  std::optional<Estimate> sigma_sq;
  std::optional<double> d_q_beta;
  std::optional<double> h_q_beta;
};

/// |q(2 beta - 1) - 1| below this counts as the boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

double factorial(int n);

double beta_fn(double x, double y);

/// sum_{i>=1} i^(-2 beta) with a certified remainder.
Estimate zeta_2beta(double beta);

/// B(2 beta - 1, 1 - beta) = int_0^inf y^(-beta) (1+y)^(-beta) dy.
double c_beta(double beta);

/// c_beta, divided by zeta(2 beta) when the weights are normalized.
double cov_constant(const ModelParams& params);

RegimeInfo classify_regime(const ModelParams& params);

/// Long-run variance (1/q!) sum_{m in Z} rho(m)^q over the lags of `cov`.
/// Exact (up to rounding) when the table holds every nonzero lag of the
/// truncated model; otherwise the tail beyond the table is bounded by
/// rho(m) <= C m^(1 - 2 beta) and NumericError is thrown if that bound
/// exceeds tol.
Estimate sigma_qbeta(const ModelParams& params, const CovarianceTable& cov, double tol = 1e-10);

/// Normalizing constant of the Hermite kernel:
///   d^2 = (q + 1 - 2 beta q)(q + 2 - 2 beta q) / (2 q! c^q).
double d_qbeta(const ModelParams& params, double cov_constant);

/// Renormalization constant of the non-central limit:
///   h^2 = 2 c^q / (q! (q + 1 - 2 beta q)(q + 2 - 2 beta q)),
/// so that d h q! = 1.
double h_qbeta(const ModelParams& params, double cov_constant);

/// Everything that does not need a covariance table; sigma_sq is filled in
/// only when `cov` is given and the model is in the CLT regime.
ConstantSet compute_constants(const ModelParams& params, const CovarianceTable* cov = nullptr,
                              double tol = 1e-10);

}  // namespace steinlab
