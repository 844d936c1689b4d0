#pragma once

#include <cstddef>
#include <functional>

namespace marcum {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;       ///< sum of per-interval Gauss/Kronrod differences
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;       ///< abs_error <= max(abs_tol, rel_tol * |value|)
};

/// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature over the
/// finite interval [lo, hi]. The interval with the largest error estimate is
/// bisected until the total estimate meets the tolerance or max_intervals is
/// reached; interval contributions are accumulated with compensated summation.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double lo, double hi,
                                double abs_tol, double rel_tol, std::size_t max_intervals = 4000);

}  // namespace marcum
