#include "steinlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "steinlab/errors.hpp"
#include "steinlab/summation.hpp"

namespace steinlab::special {

namespace {

constexpr int kDirectTerms = 64;  // pair_series sums i < kDirectTerms directly

void check_beta(double beta) {
  if (!(beta > 0.5 && beta < 1.0)) throw DomainError("beta must lie in (1/2, 1)");
}

// sum_k (c)_k / k! * s^(p+k) / (p+k), 0 <= s <= 1/2
double power_series(double s, double p, double c) {
  if (s == 0.0) return 0.0;
  double coef = 1.0;
  double sp = std::pow(s, p);
  double sum = 0.0;
  for (int k = 0; k < 4000; ++k) {
    const double term = coef * sp / (p + k);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
    coef *= (c + k) / (k + 1);
    sp *= s;
  }
  throw NumericError("incomplete beta series did not converge");
}

}  // namespace

double beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta_fn needs positive arguments");
  if (x + y < 150.0) return std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y);
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double rising_factorial(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x + k;
  return r;
}

double incomplete_beta(double s, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta needs a, b > 0");
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("incomplete_beta needs s in [0, 1]");
  if (s <= 0.5) return power_series(s, a, 1.0 - b);
  return beta_fn(a, b) - power_series(1.0 - s, b, 1.0 - a);
}

double pair_tail_integral(double beta, double m, double X) {
  check_beta(beta);
  if (!(X > 0.0) || !(m >= 0.0)) throw DomainError("pair_tail_integral needs X > 0, m >= 0");
  const double a = 2.0 * beta - 1.0;
  if (m == 0.0) return std::pow(X, -a) / a;
  return std::pow(m, -a) * incomplete_beta(m / (m + X), a, 1.0 - beta);
}

Estimate pair_series(double beta, double m) {
  check_beta(beta);
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("pair_series needs finite m >= 0");
  CompensatedSum head;
  for (int i = 1; i < kDirectTerms; ++i) {
    head += std::pow(static_cast<double>(i), -beta) * std::pow(i + m, -beta);
  }
  const double x = kDirectTerms;
  const double f = std::pow(x, -beta) * std::pow(x + m, -beta);
  const double u = 1.0 / x, v = 1.0 / (x + m);
  const double g1 = -beta * (u + v);
  const double g2 = beta * (u * u + v * v);
  const double g3 = -2.0 * beta * (u * u * u + v * v * v);
  const double d1 = f * g1;
  const double d3 = f * (g1 * g1 * g1 + 3.0 * g1 * g2 + g3);
  head += pair_tail_integral(beta, m, x);
  head += 0.5 * f;
  head += -d1 / 12.0;
  head += d3 / 720.0;
  const double value = head.value();
  const double remainder =
      f * rising_factorial(2.0 * beta, 5) / std::pow(x, 5) / 30240.0;
  return {value, remainder + 8.0 * std::numeric_limits<double>::epsilon() * value,
          ErrorKind::remainder_bound};
}

Estimate power_tail_sum(double s, std::uint64_t K) {
  if (!(s > 1.0)) throw DomainError("power_tail_sum needs s > 1");
  if (K == 0) throw DomainError("power_tail_sum needs K >= 1");
  const std::uint64_t first_tail = std::max<std::uint64_t>(K, kDirectTerms);
  CompensatedSum sum;
  for (std::uint64_t i = K; i < first_tail; ++i) sum += std::pow(static_cast<double>(i), -s);
  const double x = static_cast<double>(first_tail);
  const double f = std::pow(x, -s);
  sum += x * f / (s - 1.0);
  sum += 0.5 * f;
  sum += s * f / x / 12.0;
  sum += -s * (s + 1.0) * (s + 2.0) * f / (x * x * x) / 720.0;
  const double value = sum.value();
  const double remainder = f * rising_factorial(s, 5) / std::pow(x, 5) / 30240.0;
  return {value, remainder + 8.0 * std::numeric_limits<double>::epsilon() * value,
          ErrorKind::remainder_bound};
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double harmonic_number(std::uint64_t k) {
  if (k <= 256) {
    double s = 0.0;
    for (std::uint64_t j = k; j >= 1; --j) s += 1.0 / static_cast<double>(j);
    return s;
  }
  const double x = static_cast<double>(k);
  const double x2 = x * x;
  return std::log(x) + std::numbers::egamma + 0.5 / x - 1.0 / (12.0 * x2) +
         1.0 / (120.0 * x2 * x2);
}

}  // namespace steinlab::special
