#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "marcum/log_scaled.hpp"

namespace marcum {

/// Closed-form brackets for g_nu(t) = I_nu(t) / I_{nu-1}(t).
struct RatioBoundPair {
  double lower = 0.0;           ///< t / (nu + sqrt(nu^2 + t^2))
  double upper_general = 0.0;   ///< t / ((nu-1) + sqrt((nu-1)^2 + t^2))
  std::optional<double> upper_half_shift;  ///< t / ((nu-1/2) + ...), nu >= 1/2 only
};

/// Tunables of the Bessel kernel. The defaults are used by every public
/// entry point that does not take a config explicitly.
struct BesselConfig {
  /// Power series is used for t < max(series_min_t, nu).
  double series_min_t = 10.0;
  /// Above this argument the base order uses the large-argument expansion.
  double asymptotic_min_t = 30.0;
  /// Relative change at which continued-fraction approximants are accepted.
  double cf_tolerance = 1e-16;
  std::size_t cf_max_iterations = 10'000'000;
};

/// e^{-t} I_nu(t) for nu >= -1 and t >= 0.
LogScaled bessel_i_scaled(double nu, double t);
LogScaled bessel_i_scaled(double nu, double t, const BesselConfig& config);

/// g_nu(t) = I_nu(t) / I_{nu-1}(t) for nu >= 0 and t > 0, by the continued
/// fraction generated by the three-term recurrence.
double bessel_ratio(double nu, double t);
double bessel_ratio(double nu, double t, const BesselConfig& config);

/// g_{nu}, g_{nu+1}, ..., g_{nu+count-1} at fixed t: one continued fraction at
/// the top order, then the stable backward recurrence
/// g_v = 1 / (2v/t + g_{v+1}).
std::vector<double> bessel_ratio_sequence(double nu, double t, std::size_t count);

/// f_lambda(t) = 1 / (lambda + sqrt(lambda^2 + t^2)), evaluated without
/// cancellation for negative lambda.
double ratio_bound_f(double lambda, double t);

/// Lower and upper closed-form bounds on g_nu(t).
RatioBoundPair bessel_ratio_bounds(double nu, double t);

}  // namespace marcum
