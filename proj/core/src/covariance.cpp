#include "steinlab/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "steinlab/errors.hpp"
#include "steinlab/fft.hpp"
#include "steinlab/summation.hpp"

namespace steinlab {

namespace {

constexpr double kDirectWorkLimit = 16777216.0;  // 2^24 multiply-adds

double weight_norm_sq(double beta, std::size_t M) {
  CompensatedSum s;
  // smallest terms first
  for (std::size_t i = M; i >= 1; --i) s += std::pow(static_cast<double>(i), -2.0 * beta);
  return s.value();
}

std::vector<double> autocorrelation_fft(std::span<const double> a, std::size_t m_max) {
  const std::size_t L = good_fft_size(a.size() + m_max);
  RealFft fft(L);
  RealBuffer buf(L, 0.0);
  std::copy(a.begin(), a.end(), buf.begin());
  ComplexBuffer spec;
  fft.forward(buf, spec);
  for (auto& z : spec) z = std::norm(z);
  fft.inverse(spec, buf);
  std::vector<double> out(m_max + 1);
  const double scale = 1.0 / static_cast<double>(L);
  for (std::size_t m = 0; m <= m_max; ++m) out[m] = buf[m] * scale;
  return out;
}

}  // namespace

std::vector<double> build_weights(const ModelParams& params, std::size_t M) {
  params.validate();
  if (M < 1) throw DomainError("build_weights needs M >= 1");
  std::vector<double> w(M);
  for (std::size_t i = 0; i < M; ++i) w[i] = std::pow(static_cast<double>(i + 1), -params.beta);
  if (params.normalize_weights) {
    const double s = 1.0 / std::sqrt(weight_norm_sq(params.beta, M));
    for (double& x : w) x *= s;
  }
  return w;
}

double rho_direct(std::span<const double> weights, std::size_t m) {
  const std::size_t M = weights.size();
  if (m >= M) return 0.0;
  CompensatedSum s;
  for (std::size_t i = M - m; i-- > 0;) s += weights[i] * weights[i + m];
  return s.value();
}

CovarianceTable CovarianceTable::build(const ModelParams& params, std::size_t M,
                                       std::size_t m_max, CovarianceMethod method) {
  CovarianceTable t;
  t.beta_ = params.beta;
  t.normalized_ = params.normalize_weights;
  t.weights_ = build_weights(params, M);
  t.raw_norm_sq_ = weight_norm_sq(params.beta, M);

  if (method == CovarianceMethod::automatic) {
    const double work = static_cast<double>(M) * static_cast<double>(m_max + 1);
    method = work <= kDirectWorkLimit ? CovarianceMethod::direct : CovarianceMethod::fft;
  }
  t.method_ = method;
  const std::size_t live = std::min(m_max, M - 1);
  if (method == CovarianceMethod::direct) {
    t.rho_.assign(m_max + 1, 0.0);
    for (std::size_t m = 0; m <= live; ++m) t.rho_[m] = rho_direct(t.weights_, m);
  } else {
    t.rho_ = autocorrelation_fft(t.weights_, live);
    t.rho_.resize(m_max + 1, 0.0);
    t.rho_[0] = rho_direct(t.weights_, 0);
  }
  return t;
}

double CovarianceTable::ideal_bias_bound(std::size_t m) const {
  if (m > m_max()) throw RangeError("lag " + std::to_string(m) + " beyond the table");
  const double M = static_cast<double>(trunc_M());
  const double a = 2.0 * beta_ - 1.0;
  double bound;
  if (m >= trunc_M()) {
    // rho_M(m) = 0 and the ideal value is at most c_beta m^(1 - 2 beta)
    bound = c_beta(beta_) * std::pow(static_cast<double>(m), -a);
  } else {
    bound = std::pow(M - static_cast<double>(m), -a) / a;
  }
  if (!normalized_) return bound;
  // r/zeta - r_M/zeta_M: the weight tail also changes the normalization
  return (bound + rho_[m] * std::pow(M, -a) / a) / raw_norm_sq_;
}

double rho(const CovarianceTable& cov, std::size_t m) {
  if (m > cov.m_max()) {
    throw RangeError("lag " + std::to_string(m) + " beyond m_max = " + std::to_string(cov.m_max()));
  }
  return cov.rho()[m];
}

double rho_asymptotic_ratio(const CovarianceTable& cov, std::size_t m) {
  if (m < 1) throw DomainError("rho_asymptotic_ratio needs m >= 1");
  const double r = rho(cov, m);
  const ModelParams params{1, cov.beta(), cov.normalize_weights()};
  return r * std::pow(static_cast<double>(m), 2.0 * cov.beta() - 1.0) / cov_constant(params);
}

double power_sum_bound(double alpha, std::size_t n, PowerSumVariant variant) {
  if (n < 2) throw DomainError("power_sum_bound needs n >= 2");
  const double x = static_cast<double>(n);
  switch (variant) {
    case PowerSumVariant::partial:
      if (alpha == -1.0) throw DomainError("partial power-sum bound excludes alpha = -1");
      return 1.0 + std::pow(x, alpha + 1.0);
    case PowerSumVariant::tail:
      if (!(alpha < -1.0)) throw DomainError("tail power-sum bound needs alpha < -1");
      return std::pow(x, alpha + 1.0) / (-alpha - 1.0);
  }
  throw DomainError("unknown power-sum variant");
}

void write_covariance_csv(const CovarianceTable& cov, std::ostream& os) {
  os << "m,rho,ideal_bias_bound\n";
  char line[96];
  const auto r = cov.rho();
  for (std::size_t m = 0; m < r.size(); ++m) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", m, r[m], cov.ideal_bias_bound(m));
    os << line;
  }
}

}  // namespace steinlab
