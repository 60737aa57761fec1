#pragma once

// Independent reference computations.  Nothing here calls into the library
// under test; long double, Boost.Math and Eigen stand in for its routines.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

/// sum_{i>=1} i^-b (i+m)^-b: long-double head up to K, then the midpoint
/// integral int_{K+1/2}^inf, whose error is O(K^(-2b-2)).
inline double pair_series(double b, double m, std::size_t K = 2000000) {
  long double s = 0.0L;
  for (std::size_t i = K; i >= 1; --i) {
    const long double x = static_cast<long double>(i);
    s += std::pow(x, -static_cast<long double>(b)) * std::pow(x + m, -static_cast<long double>(b));
  }
  boost::math::quadrature::exp_sinh<double> es;
  const double a = static_cast<double>(K) + 0.5;
  const double tail =
      es.integrate([&](double t) { return std::pow(a + t, -b) * std::pow(a + t + m, -b); });
  return static_cast<double>(s) + tail;
}

/// Autocovariance of the truncated model, long double throughout.
inline double truncated_rho(double b, std::size_t M, std::size_t m, bool normalize) {
  long double norm = 0.0L, s = 0.0L;
  for (std::size_t i = M; i >= 1; --i) norm += std::pow(static_cast<long double>(i), -2.0L * b);
  for (std::size_t i = M - m; i >= 1 && m < M; --i) {
    s += std::pow(static_cast<long double>(i), -static_cast<long double>(b)) *
         std::pow(static_cast<long double>(i + m), -static_cast<long double>(b));
  }
  return static_cast<double>(normalize ? s / norm : s);
}

/// Gauss nodes and weights for the standard normal density:
/// sum_k w_k f(x_k) = E f(Z) exactly for polynomials of degree < 2n.
/// Golub-Welsch start, Newton polish on the orthonormal recurrence and
/// Christoffel weights 1 / sum_j psi_j(x)^2, all in long double.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite_prob(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  // psi_j = He_j / sqrt(j!):  psi_{j+1} = (x psi_j - sqrt(j) psi_{j-1}) / sqrt(j+1)
  const auto psi = [n](long double x, long double& christoffel, long double& prev) {
    long double p0 = 1.0L, p1 = x;
    christoffel = 1.0L + x * x;
    for (int j = 1; j < n; ++j) {
      const long double p2 = (x * p1 - std::sqrt(static_cast<long double>(j)) * p0) /
                             std::sqrt(static_cast<long double>(j + 1));
      p0 = p1;
      p1 = p2;
      if (j + 1 < n) christoffel += p1 * p1;
    }
    prev = p0;
    return p1;
  };
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    long double t = es.eigenvalues()(k), c = 0, prev = 0;
    for (int it = 0; it < 8; ++it) {
      const long double f = psi(t, c, prev);
      t -= f / (std::sqrt(static_cast<long double>(n)) * prev);
    }
    psi(t, c, prev);
    x[k] = static_cast<double>(t);
    w[k] = static_cast<double>(1.0L / c);
  }
  return {x, w};
}

/// Dense Toeplitz matrix from rho(0..N-1).
inline Eigen::MatrixXd toeplitz(const std::vector<double>& rho, std::size_t N) {
  Eigen::MatrixXd R(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) R(i, j) = rho[i > j ? i - j : j - i];
  }
  return R;
}

/// P(K > x) for the limiting Kolmogorov law, from the alternating series.
inline double kolmogorov_tail(double x) {
  long double s = 0.0L;
  for (int k = 1; k <= 200; ++k) {
    const long double t = std::exp(-2.0L * k * k * x * x);
    s += (k % 2 ? t : -t);
  }
  return static_cast<double>(2.0L * s);
}

/// Upper alpha quantile of the Kolmogorov law by bisection.
inline double kolmogorov_quantile(double alpha) {
  double lo = 0.3, hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_tail(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
