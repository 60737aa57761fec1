#include "steinlab/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steinlab/errors.hpp"

namespace steinlab {

bool RateFit::passes() const {
  return std::abs(slope - theoretical_exponent) <= pass_band;
}

double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_one_sample needs a nonempty sample");
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample needs nonempty samples");
  std::vector<double> xa(a.begin(), a.end()), xb(b.begin(), b.end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const double na = static_cast<double>(xa.size()), nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double kolmogorov_sf(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.0) {
    // Jacobi theta form of the CDF converges fast for small x
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double t = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * pi2 / (8.0 * x * x));
      s += t;
      if (t < 1e-18 * s) break;
    }
    return 1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1) ? t : -t;
    if (t < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

RateFit fit_rate(std::span<const std::pair<double, double>> points, double theoretical_exponent,
                 double pass_band) {
  if (points.size() < 4) throw DomainError("fit_rate needs at least 4 points");
  for (const auto& [N, v] : points) {
    if (!(N > 0.0)) throw DomainError("fit_rate needs positive N");
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("fit_rate needs positive values; raise reps if the estimate hit noise");
    }
  }
  const double v0 = points.front().second;
  const std::size_t n = points.size();
  std::vector<double> x(n), y(n);
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(points[i].first);
    y[i] = std::log(points[i].second / v0);
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= n;
  ybar /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_rate needs at least two distinct N");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar + std::log(v0);
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - ybar - fit.slope * (x[i] - xbar);
    ssr += r * r;
  }
  fit.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  fit.n_points = n;
  fit.theoretical_exponent = theoretical_exponent;
  fit.pass_band = pass_band;
  return fit;
}

}  // namespace steinlab
