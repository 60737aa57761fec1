#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace steinlab {

/// Log-log least-squares fit value ~ e^intercept * N^slope.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n_points = 0;
  double theoretical_exponent = std::numeric_limits<double>::quiet_NaN();
  double pass_band = 0.1;

  /// |slope - theoretical_exponent| <= pass_band
  bool passes() const;
};

/// sup_z |F_n(z) - cdf(z)|, evaluated on both sides of each sorted sample point.
double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// sup_z |F_a(z) - F_b(z)| over the merged sample.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Limiting Kolmogorov tail P(K > x) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2).
double kolmogorov_sf(double x);

/// OLS of log(value) on log(N).  Needs >= 4 points, all values > 0 and at
/// least two distinct N.  The regression uses log(v_i / v_0), so scaling
/// every value by a power of two leaves the slope bit-identical.
RateFit fit_rate(std::span<const std::pair<double, double>> points,
                 double theoretical_exponent = std::numeric_limits<double>::quiet_NaN(),
                 double pass_band = 0.1);

}  // namespace steinlab
