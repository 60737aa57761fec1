#include "steinlab/constants.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "steinlab/covariance.hpp"
#include "steinlab/errors.hpp"
#include "steinlab/special.hpp"
#include "steinlab/summation.hpp"

namespace steinlab {

void ModelParams::validate() const {
  if (q < 1) throw DomainError("q must be >= 1, got " + std::to_string(q));
  if (!(beta > 0.5 && beta < 1.0)) {
    throw DomainError("beta must lie in (1/2, 1), got " + std::to_string(beta));
  }
}

double factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double beta_fn(double x, double y) { return special::beta_fn(x, y); }

Estimate zeta_2beta(double beta) {
  ModelParams{1, beta}.validate();
  return special::power_tail_sum(2.0 * beta, 1);
}

double c_beta(double beta) {
  ModelParams{1, beta}.validate();
  return special::beta_fn(2.0 * beta - 1.0, 1.0 - beta);
}

double cov_constant(const ModelParams& params) {
  params.validate();
  const double c = c_beta(params.beta);
  return params.normalize_weights ? c / zeta_2beta(params.beta).value : c;
}

RegimeInfo classify_regime(const ModelParams& params) {
  params.validate();
  const double idx = params.regime_index();
  if (std::abs(idx - 1.0) <= kBoundaryTolerance) {
    throw BoundaryError("q(2 beta - 1) = 1: neither regime applies");
  }
  const int q = params.q;
  const double beta = params.beta;
  RegimeInfo info;
  info.threshold_q_inverse = 1.0 / (2.0 * beta - 1.0);
  if (q > 1) info.branch_threshold = q / (2.0 * q - 2.0);
  if (idx > 1.0) {
    info.regime = Regime::clt;
    const double low = q / 2.0 + 0.5 - q * beta;
    const double high = 0.5 - beta;
    info.clt_exponent = std::max(low, high);
    // q = 1 never reaches the CLT regime, so the threshold exists here
    info.clt_branch = beta <= *info.branch_threshold ? CltBranch::low_beta : CltBranch::high_beta;
  } else {
    info.regime = Regime::nclt;
    info.nclt_exponent = 2.0 * beta * q - q - 1.0;
  }
  return info;
}

Estimate sigma_qbeta(const ModelParams& params, const CovarianceTable& cov, double tol) {
  const RegimeInfo info = classify_regime(params);
  if (info.regime != Regime::clt) {
    throw RegimeError("sigma_qbeta: the variance series diverges for q(2 beta - 1) < 1");
  }
  if (!(tol > 0.0)) throw DomainError("sigma_qbeta needs tol > 0");
  const int q = params.q;
  const auto rho = cov.rho();
  const std::size_t last = std::min<std::size_t>(rho.size(), cov.trunc_M()) - 1;
  CompensatedSum sum, slope;
  for (std::size_t m = 1; m <= last; ++m) {
    sum += std::pow(rho[m], q);
    slope += std::pow(rho[m], q - 1);
  }
  const double qf = factorial(q);
  const double value = (std::pow(rho[0], q) + 2.0 * sum.value()) / qf;

  double remainder = 0.0;
  if (last + 1 < cov.trunc_M()) {
    // rho_M(m) <= r(m) / scale <= c_beta m^(1-2 beta) / scale, scale = weight norm^2
    const double C = c_beta(params.beta) / cov.weight_scale();
    const double gamma = q * (2.0 * params.beta - 1.0);
    const double K = static_cast<double>(last) + 1.0;
    // sum_{m>=K} m^(-gamma) <= K^(-gamma) + K^(1-gamma)/(gamma-1)
    const double tail = std::pow(K, -gamma) + std::pow(K, 1.0 - gamma) / (gamma - 1.0);
    remainder = 2.0 * std::pow(C, q) * tail / qf;
  }
  // summation rounding plus a few ulps of rho(0) in every table entry
  const double eps = std::numeric_limits<double>::epsilon();
  remainder += 4.0 * eps * value + 2.0 * q * slope.value() * 4.0 * eps * rho[0] / qf;
  if (remainder > tol) {
    throw NumericError("sigma_qbeta: tail bound " + std::to_string(remainder) +
                       " exceeds tolerance; extend the covariance table");
  }
  return {value, remainder, ErrorKind::remainder_bound};
}

namespace {

double nclt_factor(const ModelParams& params) {
  const RegimeInfo info = classify_regime(params);
  if (info.regime != Regime::nclt) {
    throw RegimeError("Hermite-limit constants need q(2 beta - 1) < 1");
  }
  const double qb = 2.0 * params.beta * params.q;
  return (params.q + 1.0 - qb) * (params.q + 2.0 - qb);
}

}  // namespace

double d_qbeta(const ModelParams& params, double cov_const) {
  const double P = nclt_factor(params);
  if (!(cov_const > 0.0)) throw DomainError("d_qbeta needs a positive covariance constant");
  return std::sqrt(P / (2.0 * factorial(params.q) * std::pow(cov_const, params.q)));
}

double h_qbeta(const ModelParams& params, double cov_const) {
  const double P = nclt_factor(params);
  if (!(cov_const > 0.0)) throw DomainError("h_qbeta needs a positive covariance constant");
  return std::sqrt(2.0 * std::pow(cov_const, params.q) / (factorial(params.q) * P));
}

ConstantSet compute_constants(const ModelParams& params, const CovarianceTable* cov, double tol) {
  const RegimeInfo info = classify_regime(params);
  ConstantSet out;
  out.c_beta = c_beta(params.beta);
  out.zeta_2beta = zeta_2beta(params.beta);
  out.cov_constant = params.normalize_weights ? out.c_beta / out.zeta_2beta.value : out.c_beta;
  if (info.regime == Regime::nclt) {
    out.d_q_beta = d_qbeta(params, out.cov_constant);
    out.h_q_beta = h_qbeta(params, out.cov_constant);
  } else if (cov != nullptr) {
    out.sigma_sq = sigma_qbeta(params, *cov, tol);
  }
  return out;
}

}  // namespace steinlab
