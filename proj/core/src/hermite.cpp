#include "steinlab/hermite.hpp"

#include <string>

#include "steinlab/errors.hpp"

namespace steinlab {

namespace {

void check_degree(int n, int max_degree) {
  if (n < 0 || n > max_degree) {
    throw DomainError("Hermite degree " + std::to_string(n) + " outside [0, " +
                      std::to_string(max_degree) + "]");
  }
}

}  // namespace

double hermite_paper(int n, double x) {
  if (n < 0) throw DomainError("Hermite degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = (x * cur - prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_prob(int n, double x) {
  if (n < 0) throw DomainError("Hermite degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

HermiteEvaluator::HermiteEvaluator(int max_degree, HermiteNormalization normalization)
    : max_degree_(max_degree), normalization_(normalization) {
  if (max_degree < 0) throw DomainError("max_degree must be non-negative");
}

double HermiteEvaluator::operator()(int n, double x) const {
  check_degree(n, max_degree_);
  return normalization_ == HermiteNormalization::paper ? hermite_paper(n, x) : hermite_prob(n, x);
}

void HermiteEvaluator::evaluate_all(double x, std::span<double> out) const {
  if (out.empty()) return;
  check_degree(static_cast<int>(out.size()) - 1, max_degree_);
  const bool paper = normalization_ == HermiteNormalization::paper;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = paper ? (x * out[k] - out[k - 1]) / static_cast<double>(k + 1)
                       : x * out[k] - static_cast<double>(k) * out[k - 1];
  }
}

}  // namespace steinlab
