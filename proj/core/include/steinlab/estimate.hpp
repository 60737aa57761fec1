#pragma once

#include <cmath>

namespace steinlab {

/// How the error attached to an Estimate should be read.
enum class ErrorKind {
  standard_error,   // Monte Carlo standard error
  remainder_bound,  // rigorous bound on a deterministic truncation remainder
};

/// A scalar together with its uncertainty.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  ErrorKind kind = ErrorKind::remainder_bound;

  double lower(double k = 1.0) const { return value - k * error; }
  double upper(double k = 1.0) const { return value + k * error; }

  /// |value - x| <= k * error
  bool covers(double x, double k = 1.0) const {
    return std::abs(value - x) <= k * error;
  }
};

}  // namespace steinlab
