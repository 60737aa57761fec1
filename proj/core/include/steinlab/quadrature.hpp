#pragma once

#include <functional>

#include "steinlab/estimate.hpp"

namespace steinlab {

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Globally adaptive Gauss-Legendre quadrature on [a, b].  Each panel is
/// integrated with 10- and 20-point rules; the panel with the largest
/// discrepancy is bisected until the summed discrepancy meets the tolerance.
/// The returned error is that summed discrepancy (a heuristic, not a proof).
Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureOptions& opts = {});

}  // namespace steinlab
