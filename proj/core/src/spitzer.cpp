#include "steinlab/spitzer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "steinlab/errors.hpp"
#include "steinlab/quadrature.hpp"
#include "steinlab/special.hpp"
#include "steinlab/summation.hpp"

namespace steinlab {

namespace {

constexpr std::size_t kMinSurrogate = 10000;

using special::normal_pdf;
using special::normal_sf;

void require(const ModelParams& params, Regime r, const char* what) {
  if (classify_regime(params).regime != r) {
    throw RegimeError(std::string(what) + (r == Regime::clt ? " needs the CLT regime"
                                                            : " needs the NCLT regime"));
  }
}

void check_eps(double eps, std::uint64_t N_max) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive and finite");
  if (N_max < 1) throw DomainError("N_max must be >= 1");
}

// int_a^inf ln(u) phi(u) du
double log_normal_moment_tail(double a) {
  // int_0^inf ln(u) phi(u) du = E ln|Z| / 2 = -(gamma + ln 2) / 4
  const double half_moment = -(std::numbers::egamma + std::numbers::ln2) / 4.0;
  if (a <= 0.0) return half_moment;
  if (a < 1.0) {
    // int_0^a ln(u) u^(2k) du = a^(2k+1) (ln a / (2k+1) - 1 / (2k+1)^2)
    const double la = std::log(a);
    double coef = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double apow = a;
    double head = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double m = 2.0 * k + 1.0;
      const double term = coef * apow * (la / m - 1.0 / (m * m));
      head += term;
      if (std::abs(term) < 1e-18 * std::abs(head)) break;
      coef *= -0.5 / (k + 1.0);
      apow *= a * a;
    }
    return half_moment - head;
  }
  const auto f = [](double u) { return std::log(u) * normal_pdf(u); };
  return integrate(f, a, a + 40.0).value;
}

// int_A^inf (2/x) Q(eps sqrt(x) / sigma) dx = 4 int_a^inf Q(u)/u du
double f1_tail_integral(double sigma, double eps, double A) {
  const double a = eps * std::sqrt(A) / sigma;
  return 4.0 * (-std::log(a) * normal_sf(a) + log_normal_moment_tail(a));
}

// int_A^inf 2 Q(eps sqrt(x) / sigma) dx = (4 sigma^2/eps^2) int_a^inf u Q(u) du
double g1_tail_integral(double sigma, double eps, double A) {
  const double a = eps * std::sqrt(A) / sigma;
  const double Q = normal_sf(a);
  const double inner = -0.5 * a * a * Q + 0.5 * (a * normal_pdf(a) + Q);
  return 4.0 * sigma * sigma / (eps * eps) * inner;
}

template <class Term, class TailIntegral>
SeriesValue gaussian_series(double eps, std::uint64_t N_max, Term term, TailIntegral tail) {
  SeriesValue out;
  out.epsilon = eps;
  out.n_terms = N_max;
  CompensatedSum s;
  for (std::uint64_t N = N_max; N >= 1; --N) s += term(static_cast<double>(N));
  out.partial_sum = s.value();
  // terms decrease in N, so sum_{N>N_max} lies in
  // [int_{N_max+1}^inf, int_{N_max}^inf], an interval of width <= term(N_max)
  const double upper = tail(static_cast<double>(N_max));
  const double width = term(static_cast<double>(N_max));
  out.tail_estimate = std::max(upper - 0.5 * width, 0.0);
  out.tail_remainder_bound = 0.5 * width;
  return out;
}

// Smallest K with t (K+1)^a >= |z|: the number of N >= 1 with |z| > t N^a.
std::uint64_t exceed_count(double z, double t, double a) {
  const double x = std::pow(std::abs(z) / t, 1.0 / a);
  if (!(x > 1.0)) return 0;
  if (x > 9.0e18) throw NumericError("surrogate exceedance count overflows");
  auto K = static_cast<std::uint64_t>(std::ceil(x)) - 1;
  // guard against pow rounding on either side of an integer
  while (K > 0 && !(t * std::pow(static_cast<double>(K), a) < std::abs(z))) --K;
  while (t * std::pow(static_cast<double>(K + 1), a) < std::abs(z)) ++K;
  return K;
}

template <class Accumulate>
SeriesValue surrogate_series(const ModelParams& params, std::span<const double> surrogate,
                             double eps, std::uint64_t N_max, Accumulate term_sum) {
  require(params, Regime::nclt, "surrogate series");
  check_eps(eps, N_max);
  if (surrogate.size() < kMinSurrogate) throw DomainError("surrogate needs at least 10^4 draws");
  ModelParams lit = params;
  lit.normalize_weights = false;
  const double h = h_qbeta(lit, c_beta(params.beta));
  const double a = nclt_growth_exponent(params);
  const double t = eps / h;
  CompensatedSum head, rest;
  for (double z : surrogate) {
    const std::uint64_t K = exceed_count(z, t, a);
    const std::uint64_t Kc = std::min(K, N_max);
    const double full = term_sum(K);
    const double part = term_sum(Kc);
    head += part;
    rest += full - part;
  }
  const double n = static_cast<double>(surrogate.size());
  SeriesValue out;
  out.epsilon = eps;
  out.n_terms = N_max;
  out.partial_sum = head.value() / n;
  out.tail_estimate = rest.value() / n;
  out.tail_remainder_bound = 0.0;
  out.probability_floor = 1.0 / n;
  return out;
}

}  // namespace

double nclt_growth_exponent(const ModelParams& params) {
  return 1.0 + 0.5 * params.q - params.beta * params.q;
}

double spitzer_limit(const ModelParams& params) {
  const RegimeInfo info = classify_regime(params);
  return info.regime == Regime::clt ? 2.0 : 1.0 / nclt_growth_exponent(params);
}

SeriesValue f1_hat(const ModelParams& params, double sigma, double eps, std::uint64_t N_max) {
  require(params, Regime::clt, "f1_hat");
  check_eps(eps, N_max);
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  return gaussian_series(
      eps, N_max, [&](double N) { return 2.0 / N * normal_sf(eps * std::sqrt(N) / sigma); },
      [&](double A) { return f1_tail_integral(sigma, eps, A); });
}

SeriesValue g1_hat(const ModelParams& params, double sigma, double eps, std::uint64_t N_max) {
  require(params, Regime::clt, "g1_hat");
  check_eps(eps, N_max);
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  return gaussian_series(
      eps, N_max, [&](double N) { return 2.0 * normal_sf(eps * std::sqrt(N) / sigma); },
      [&](double A) { return g1_tail_integral(sigma, eps, A); });
}

SeriesValue f2_hat(const ModelParams& params, std::span<const double> surrogate, double eps,
                   std::uint64_t N_max) {
  return surrogate_series(params, surrogate, eps, N_max,
                          [](std::uint64_t K) { return special::harmonic_number(K); });
}

SeriesValue g2_hat(const ModelParams& params, std::span<const double> surrogate, double eps,
                   std::uint64_t N_max) {
  return surrogate_series(params, surrogate, eps, N_max,
                          [](std::uint64_t K) { return static_cast<double>(K); });
}

}  // namespace steinlab
