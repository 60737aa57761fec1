#pragma once

#include <cmath>
#include <span>

namespace steinlab {

/// Neumaier's variant of Kahan summation.  Long memory makes the tails of
/// most series here decay slowly, so plain accumulation loses digits well
/// before 10^6 terms.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

}  // namespace steinlab
