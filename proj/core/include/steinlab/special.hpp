#pragma once

#include <cstdint>

#include "steinlab/estimate.hpp"

namespace steinlab::special {

/// Euler's beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y).
/// Throws DomainError unless x > 0 and y > 0.
double beta_fn(double x, double y);

/// Lower incomplete beta integral (not regularized):
///   int_0^s u^(a-1) (1-u)^(b-1) du,   0 <= s <= 1.
/// Power series in s for s <= 1/2, complement series in 1-s otherwise.
double incomplete_beta(double s, double a, double b);

/// int_X^inf x^(-beta) (x+m)^(-beta) dx   for X > 0, m >= 0, beta in (1/2, 1).
double pair_tail_integral(double beta, double m, double X);

/// sum_{i>=1} i^(-beta) (i+m)^(-beta).
///
/// The first terms are summed directly; the rest is the Euler-Maclaurin
/// expansion through the f''' term.  The summand is completely monotone, so
/// the expansion is enveloping and the first omitted term,
/// |f^(5)(I)| / 30240 <= f(I) (2 beta)_5 / (30240 I^5), bounds the error.
Estimate pair_series(double beta, double m);

/// sum_{i>=K} i^(-s) for s > 1, K >= 1, with the same direct-plus-
/// Euler-Maclaurin split as pair_series.
Estimate power_tail_sum(double s, std::uint64_t K);

double normal_pdf(double x);
double normal_cdf(double x);
/// 1 - Phi(x), accurate in the upper tail.
double normal_sf(double x);

/// H_k = 1 + 1/2 + ... + 1/k  (H_0 = 0).
double harmonic_number(std::uint64_t k);

/// Rising factorial (x)_n = x (x+1) ... (x+n-1).
double rising_factorial(double x, int n);

}  // namespace steinlab::special
