#pragma once

namespace steinlab {

/// Inverse of the standard normal CDF, Wichura's AS241 (PPND16), about
/// 16 significant digits on (0, 1).  Returns -inf/+inf at 0 and 1.
double inverse_normal_cdf(double p);

}  // namespace steinlab
