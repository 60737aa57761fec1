#pragma once

#include <span>

namespace steinlab {

/// paper:        H_n(x) = ((-1)^n / n!) e^(x^2/2) d^n/dx^n e^(-x^2/2)
/// probabilists: He_n(x) = n! H_n(x)
enum class HermiteNormalization { paper, probabilists };

class HermiteEvaluator {
 public:
  HermiteEvaluator(int max_degree, HermiteNormalization normalization);

  int max_degree() const { return max_degree_; }
  HermiteNormalization normalization() const { return normalization_; }

  /// Degree n at x; DomainError for n outside [0, max_degree].
  double operator()(int n, double x) const;

  /// Degrees 0..out.size()-1 at x, all from one recurrence pass.
  void evaluate_all(double x, std::span<double> out) const;

 private:
  int max_degree_;
  HermiteNormalization normalization_;
};

/// (n+1) H_{n+1}(x) = x H_n(x) - H_{n-1}(x),  H_0 = 1, H_1 = x.
double hermite_paper(int n, double x);

/// He_{n+1}(x) = x He_n(x) - n He_{n-1}(x),  He_0 = 1, He_1 = x.
double hermite_prob(int n, double x);

}  // namespace steinlab
