#include "marcum/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "marcum/errors.hpp"

namespace marcum {

namespace {

constexpr long double kTiny = 1e-4000L;
// Partial sums are rescaled when they pass this magnitude so that the series
// never overflows the long double range.
constexpr long double kRescaleAt = 1e1000L;

void require_finite(double nu, double t) {
  if (!std::isfinite(nu) || !std::isfinite(t)) {
    throw DomainError("Bessel arguments must be finite");
  }
}

/// e^{-t} I_nu(t) by the ascending series
/// (t/2)^nu / Gamma(nu+1) * sum_k (t^2/4)^k / (k! (nu+1)_k).
LogScaled series_scaled(double nu, double t) {
  const long double q = static_cast<long double>(t) * t / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  std::int64_t rescale_exponent = 0;
  for (long k = 1;; ++k) {
    const long double ratio = q / (static_cast<long double>(k) * (nu + k));
    term *= ratio;
    sum += term;
    if (sum > kRescaleAt) {
      int e = 0;
      sum = std::frexp(sum, &e);
      term = std::ldexp(term, -e);
      rescale_exponent += e;
    }
    // The term ratio decreases in k, so once it is below 1 the remaining
    // tail is dominated by a geometric series.
    const long double next_ratio = q / (static_cast<long double>(k + 1) * (nu + k + 1));
    if (next_ratio < 1.0L && term * next_ratio / (1.0L - next_ratio) <= 1e-20L * sum) break;
    if (k > 100'000'000) throw ConvergenceError("Bessel power series did not converge");
  }
  LogScaled out = LogScaled::exp(-t) * LogScaled::from_long_double(sum) *
                  LogScaled::from_parts(1.0, rescale_exponent);
  if (nu != 0.0) out *= LogScaled::pow(t / 2.0, nu);
  return out / LogScaled::gamma(nu + 1.0);
}

/// e^{-t} I_nu(t) ~ (2 pi t)^{-1/2} sum_k (-1)^k a_k(nu) / t^k for large t;
/// used only for |nu| < 1 and t >= 30, where the truncation error is far
/// below double precision.
LogScaled hankel_scaled(double nu, double t) {
  const long double mu = 4.0L * nu * nu;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double previous_magnitude = 1.0L;
  for (int k = 1; k < 1000; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= -(mu - odd * odd) / (8.0L * k * t);
    const long double magnitude = std::abs(term);
    if (magnitude > previous_magnitude) break;
    sum += term;
    if (magnitude <= 1e-21L * std::abs(sum)) break;
    previous_magnitude = magnitude;
  }
  const long double scale = 1.0L / std::sqrt(2.0L * std::numbers::pi_v<long double> * t);
  return LogScaled::from_long_double(sum * scale);
}

/// g_nu(t) for nu > 0 by the modified Lentz method.
long double ratio_cf(long double nu, long double t, const BesselConfig& config) {
  long double f = kTiny;
  long double c = f;
  long double d = 0.0L;
  for (std::size_t k = 1; k <= config.cf_max_iterations; ++k) {
    const long double b = 2.0L * (nu + static_cast<long double>(k) - 1.0L) / t;
    d = b + d;
    if (d == 0.0L) d = kTiny;
    c = b + 1.0L / c;
    if (c == 0.0L) c = kTiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0L) <= config.cf_tolerance) return f;
  }
  throw ConvergenceError("Bessel ratio continued fraction did not converge for nu=" +
                         std::to_string(static_cast<double>(nu)) +
                         ", t=" + std::to_string(static_cast<double>(t)));
}

long double ratio_long(long double nu, long double t, const BesselConfig& config) {
  if (nu == 0.0L) return 1.0L / ratio_cf(1.0L, t, config);
  return ratio_cf(nu, t, config);
}

/// I_{nu+n}(t) / I_nu(t) = prod_{j=1..n} g_{nu+j}(t), computed top-down.
LogScaled ratio_chain(double nu, double t, long n, const BesselConfig& config) {
  if (n <= 0) return LogScaled::one();
  const long double lt = t;
  long double g = ratio_long(static_cast<long double>(nu) + n, lt, config);
  LogScaled product = LogScaled::one();
  long double block = g;
  for (long j = n - 1; j >= 1; --j) {
    const long double v = static_cast<long double>(nu) + j;
    g = 1.0L / (2.0L * v / lt + g);
    block *= g;
    if (block < 1e-3000L) {
      product *= LogScaled::from_long_double(block);
      block = 1.0L;
    }
  }
  return product * LogScaled::from_long_double(block);
}

}  // namespace

LogScaled bessel_i_scaled(double nu, double t) { return bessel_i_scaled(nu, t, BesselConfig{}); }

LogScaled bessel_i_scaled(double nu, double t, const BesselConfig& config) {
  require_finite(nu, t);
  if (nu < -1.0) throw DomainError("bessel_i_scaled requires nu >= -1");
  if (t < 0.0) throw DomainError("bessel_i_scaled requires t >= 0");
  if (nu == -1.0) nu = 1.0;  // I_{-n} = I_n for integer n
  if (t == 0.0) {
    if (nu == 0.0) return LogScaled::one();
    if (nu > 0.0) return {};
    throw DomainError("I_nu(0) is unbounded for -1 < nu < 0");
  }
  if (t < std::max(config.series_min_t, nu)) return series_scaled(nu, t);

  // Split nu = base + n with base in [0,1) (or base = nu when nu < 0), get
  // the base order directly and climb with the ratio chain.
  const double base = nu >= 0.0 ? nu - std::floor(nu) : nu;
  const long n = nu >= 0.0 ? static_cast<long>(std::floor(nu)) : 0;
  const LogScaled base_value =
      t < config.asymptotic_min_t ? series_scaled(base, t) : hankel_scaled(base, t);
  return base_value * ratio_chain(base, t, n, config);
}

double bessel_ratio(double nu, double t) { return bessel_ratio(nu, t, BesselConfig{}); }

double bessel_ratio(double nu, double t, const BesselConfig& config) {
  require_finite(nu, t);
  if (nu < 0.0) throw DomainError("bessel_ratio requires nu >= 0");
  if (!(t > 0.0)) throw DomainError("bessel_ratio requires t > 0");
  return static_cast<double>(ratio_long(nu, t, config));
}

std::vector<double> bessel_ratio_sequence(double nu, double t, std::size_t count) {
  require_finite(nu, t);
  if (nu < 0.0) throw DomainError("bessel_ratio_sequence requires nu >= 0");
  if (!(t > 0.0)) throw DomainError("bessel_ratio_sequence requires t > 0");
  std::vector<double> out(count);
  if (count == 0) return out;
  const BesselConfig config;
  const long double lt = t;
  const long double top = static_cast<long double>(nu) + static_cast<long double>(count - 1);
  long double g = ratio_long(top, lt, config);
  out[count - 1] = static_cast<double>(g);
  for (std::size_t j = count - 1; j-- > 0;) {
    const long double v = static_cast<long double>(nu) + static_cast<long double>(j);
    g = 1.0L / (2.0L * v / lt + g);
    out[j] = static_cast<double>(g);
  }
  return out;
}

double ratio_bound_f(double lambda, double t) {
  require_finite(lambda, t);
  const double root = std::hypot(lambda, t);
  if (lambda >= 0.0) return 1.0 / (lambda + root);
  // lambda + root = t^2 / (root - lambda) without cancellation.
  return (root - lambda) / (t * t);
}

RatioBoundPair bessel_ratio_bounds(double nu, double t) {
  require_finite(nu, t);
  if (nu < 0.0) throw DomainError("bessel_ratio_bounds requires nu >= 0");
  if (!(t > 0.0)) throw DomainError("bessel_ratio_bounds requires t > 0");
  RatioBoundPair out;
  out.lower = t * ratio_bound_f(nu, t);
  out.upper_general = t * ratio_bound_f(nu - 1.0, t);
  if (nu >= 0.5) out.upper_half_shift = t * ratio_bound_f(nu - 0.5, t);
  return out;
}

}  // namespace marcum
