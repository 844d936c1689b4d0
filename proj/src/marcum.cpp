#include "marcum/marcum.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "marcum/bessel.hpp"
#include "marcum/central_gamma.hpp"
#include "marcum/errors.hpp"
#include "marcum/quadrature.hpp"

namespace marcum {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;
constexpr std::size_t kRatioChunk = 64;

void require_point(const MarcumPoint& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw DomainError("Marcum arguments must be finite");
  }
  if (p.x < 0.0) throw DomainError("Marcum functions require x >= 0");
  if (!(p.y > 0.0)) throw DomainError("Marcum functions require y > 0");
}

bool is_central(const MarcumPoint& p) { return p.x < kCentralThreshold; }

/// Bessel argument 2 sqrt(xy), formed without overflowing xy.
double bessel_argument(double x, double y) { return 2.0 * std::sqrt(x) * std::sqrt(y); }

LogScaled central_kernel(double mu, double y) {
  if (mu == -1.0) return {};  // 1/Gamma(0)
  return LogScaled::pow(y, mu) * LogScaled::exp(-y) / LogScaled::gamma(mu + 1.0);
}

/// F_nu at (x, t) for nu >= -1 as a double relative to a scale.
double kernel_ratio(double nu, double x, double t, const LogScaled& scale) {
  const LogScaled value = f_kernel({nu, x, t});
  return (value / scale).to_double();
}

/// Rate 1 - 1/c_nu(x, t) at which F_nu(x, .) decays at t; c_nu(0, t) = t/nu.
double decay_rate(double nu, double x, double t) {
  if (x < kCentralThreshold) return 1.0 - nu / t;
  return 1.0 - 1.0 / c_coefficient({nu, x, t}, 0);
}

/// Sum of F_{mu+k}, k >= 0, scaled by 1/F_mu, with its tail bound.
struct FSeries {
  long double sum = 1.0L;
  long double tail = 0.0L;
  std::size_t terms = 1;
};

FSeries f_series(const MarcumPoint& p, const SeriesConfig& config) {
  const double t = bessel_argument(p.x, p.y);
  const long double scale = std::sqrt(static_cast<long double>(p.y)) / std::sqrt(static_cast<long double>(p.x));
  FSeries out;
  long double term = 1.0L;
  std::size_t k = 0;  // terms added beyond the first
  while (true) {
    const std::vector<double> ratios = bessel_ratio_sequence(p.mu + 1.0 + static_cast<double>(k), t, kRatioChunk);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      const long double c = scale * ratios[i];  // c_{mu+k+1}
      term *= c;
      out.sum += term;
      ++k;
      // The coefficients decrease with the order, so every later ratio is at
      // most the next one (or this one at the end of a chunk).
      const long double next = scale * (i + 1 < ratios.size() ? ratios[i + 1] : ratios[i]);
      const long double tail = term * next / (1.0L - next);
      if (term <= config.eps * out.sum && tail <= config.eps * out.sum) {
        out.tail = tail;
        out.terms = k + 1;
        return out;
      }
      if (k + 1 >= config.max_terms) {
        throw ConvergenceError("F-series for P exceeded " + std::to_string(config.max_terms) + " terms");
      }
    }
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::series_f: return "series-F";
    case Method::series_poisson: return "series-poisson";
    case Method::complement: return "complement";
    case Method::quadrature_oracle: return "quadrature-oracle";
    case Method::central: return "central";
  }
  return "unknown";
}

LogScaled f_kernel(const MarcumPoint& p) {
  require_point(p);
  if (p.mu < -1.0) throw DomainError("F_mu requires mu >= -1");
  const double t = bessel_argument(p.x, p.y);
  if (is_central(p) || t == 0.0) return central_kernel(p.mu, p.y);
  // e^{-x-y} I_mu(t) = e^{-(sqrt x - sqrt y)^2} [e^{-t} I_mu(t)]
  const double root_gap = (p.x - p.y) / (std::sqrt(p.x) + std::sqrt(p.y));
  LogScaled out = LogScaled::exp(-root_gap * root_gap) * bessel_i_scaled(p.mu, t);
  if (p.mu != 0.0) out = out * LogScaled::pow(p.y, 0.5 * p.mu) / LogScaled::pow(p.x, 0.5 * p.mu);
  return out;
}

double c_coefficient(const MarcumPoint& p, int shift) {
  require_point(p);
  const double nu = p.mu + shift;
  if (nu < 0.0) throw DomainError("c_nu requires nu = mu + shift >= 0");
  const double t = bessel_argument(p.x, p.y);
  if (is_central(p) || t == 0.0) {
    if (nu == 0.0) throw DomainError("c_0(0, y) is undefined");
    return p.y / nu;
  }
  return std::sqrt(p.y) / std::sqrt(p.x) * bessel_ratio(nu, t);
}

EvalReport q_by_poisson_mixture(const MarcumPoint& p, const SeriesConfig& config) {
  require_point(p);
  if (!(p.mu > -2.0)) throw DomainError("the Poisson mixture for Q requires mu > -2");

  // Orders mu + k <= 0 give signed central values; handle them in plain
  // arithmetic and switch to scaled positive terms from k0 on.
  const std::size_t k0 = p.mu > 0.0 ? 0 : static_cast<std::size_t>(std::floor(-p.mu)) + 1;
  LogScaled weight = LogScaled::exp(-p.x);
  long double signed_part = 0.0L;
  for (std::size_t k = 0; k < k0; ++k) {
    signed_part += weight.to_long_double() * regularized_q_extended(p.mu + static_cast<double>(k), p.y);
    weight *= p.x / static_cast<double>(k + 1);
  }

  double a = p.mu + static_cast<double>(k0);
  LogScaled q = incgamma_scaled(a, p.y).q;
  // Increment Q_{a+1}(y) - Q_a(y) = y^a e^{-y} / Gamma(a+1).
  LogScaled increment = LogScaled::pow(p.y, a) * LogScaled::exp(-p.y) / LogScaled::gamma(a + 1.0);
  LogScaled sum;
  std::size_t terms = k0;
  double tail = 0.0;
  for (std::size_t k = k0;; ++k) {
    sum += weight * q;
    ++terms;
    const double kd = static_cast<double>(k);
    const LogScaled next_weight = weight * (p.x / (kd + 1.0));
    // Remaining terms are at most sum_{j>k} w_j since each Q_{mu+j}(y) <= 1,
    // and w_{j+1}/w_j = x/(j+1) <= x/(k+2) from here on.
    if (kd + 2.0 > p.x) {
      tail = next_weight.to_double() / (1.0 - p.x / (kd + 2.0));
      const double total = std::abs(sum.to_double() + static_cast<double>(signed_part));
      if (tail <= config.eps * total || next_weight.is_zero()) break;
    }
    if (terms >= config.max_terms) {
      throw ConvergenceError("Poisson mixture exceeded " + std::to_string(config.max_terms) + " terms");
    }
    q += increment;
    increment *= p.y / (a + 1.0);
    a += 1.0;
    weight = next_weight;
  }
  const double value = sum.to_double() + static_cast<double>(signed_part);
  EvalReport out;
  out.value = value;
  out.abs_error_est = tail + 4.0 * static_cast<double>(terms) * kUnitRoundoff * std::abs(value);
  out.terms_used = terms;
  out.method = Method::series_poisson;
  return out;
}

EvalReport marcum_p(const MarcumPoint& p, const SeriesConfig& config) {
  require_point(p);
  if (!(p.mu > 0.0)) {
    throw DomainError("P_mu is evaluated only for mu > 0 (it is discontinuous at mu = 0)");
  }
  EvalReport out;
  if (is_central(p)) {
    out.value = incgamma_regularized(p.mu, p.y).p;
    out.abs_error_est = 8.0 * kUnitRoundoff * out.value;
    out.terms_used = 1;
    out.method = Method::central;
    return out;
  }
  if (c_coefficient(p, 1) >= 1.0) {
    // No geometric tail bound: take the complement of the mixture.
    const EvalReport q = q_by_poisson_mixture(p, config);
    out.value = 1.0 - q.value;
    out.abs_error_est = q.abs_error_est + kUnitRoundoff;
    out.terms_used = q.terms_used;
    out.method = Method::complement;
    return out;
  }
  const LogScaled first = f_kernel(p);
  const FSeries series = f_series(p, config);
  out.value = (first * LogScaled::from_long_double(series.sum)).to_double();
  out.abs_error_est = (first * LogScaled::from_long_double(series.tail)).to_double() +
                      4.0 * static_cast<double>(series.terms) * kUnitRoundoff * out.value;
  out.terms_used = series.terms;
  out.method = Method::series_f;
  return out;
}

EvalReport marcum_q(const MarcumPoint& p, const SeriesConfig& config) {
  require_point(p);
  if (!(p.mu > -2.0)) throw DomainError("Q_mu is evaluated only for mu > -2");
  EvalReport out;
  if (is_central(p)) {
    out.value = p.mu > 0.0 ? incgamma_regularized(p.mu, p.y).q : regularized_q_extended(p.mu, p.y);
    out.abs_error_est = 8.0 * kUnitRoundoff * std::abs(out.value);
    out.terms_used = 1;
    out.method = Method::central;
    return out;
  }
  const EvalReport mixture = q_by_poisson_mixture(p, config);
  if (p.mu > 0.0 && mixture.value > 0.5 && c_coefficient(p, 1) < 1.0) {
    // P is the smaller tail: sum it directly and complement.
    const LogScaled first = f_kernel(p);
    const FSeries series = f_series(p, config);
    const double pv = (first * LogScaled::from_long_double(series.sum)).to_double();
    out.value = 1.0 - pv;
    out.abs_error_est = (first * LogScaled::from_long_double(series.tail)).to_double() +
                        4.0 * static_cast<double>(series.terms) * kUnitRoundoff * pv + kUnitRoundoff;
    out.terms_used = series.terms;
    out.method = Method::complement;
    return out;
  }
  return mixture;
}

OraclePair q_by_quadrature(const MarcumPoint& p, double rel_tol) {
  require_point(p);
  if (!(p.mu > 0.0)) throw DomainError("the quadrature oracle requires mu > 0");
  const double x = p.x;
  const double y = p.y;
  const double mu = p.mu;
  OraclePair out;
  out.integrated_q = y >= x + mu;

  if (out.integrated_q) {
    // Q = int_y^inf F_{mu-1}(x,t) dt, truncated at T with a rigorous bound.
    const double nu = mu - 1.0;
    LogScaled scale = f_kernel({nu, x, y});
    if (scale.is_zero()) scale = LogScaled::one();
    auto integrand = [&](double t) { return kernel_ratio(nu, x, t, scale); };
    double lo = y;
    double width = std::max(20.0, 8.0 * std::sqrt(std::max(x, y)));
    double integral = 0.0;
    double error = 0.0;
    double tail = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 60; ++round) {
      const double hi = lo + width;
      const QuadratureResult piece = integrate_gk15(integrand, lo, hi, 0.25 * rel_tol * integral, 0.5 * rel_tol);
      if (!piece.converged) throw ToleranceError("quadrature did not reach the requested accuracy");
      integral += piece.value;
      error += piece.abs_error;
      out.evaluations += piece.evaluations;
      lo = hi;
      width *= 2.0;
      // Tail beyond lo: int F_nu <= F_nu(lo)/(1 - 1/c_nu(lo)) for nu >= 0;
      // for nu < 0 use F_{mu-1} = F_mu / c_mu and the same bound on F_mu.
      double rate = 0.0;
      double head = 0.0;
      if (nu >= 0.0) {
        rate = decay_rate(nu, x, lo);
        head = kernel_ratio(nu, x, lo, scale);
      } else {
        const double c = x < kCentralThreshold ? lo / mu : c_coefficient({mu, x, lo}, 0);
        rate = c - 1.0;
        head = kernel_ratio(mu, x, lo, scale);
      }
      if (rate > 0.0) {
        tail = head / rate;
        if (tail <= 0.1 * rel_tol * integral) break;
      }
    }
    if (!(tail <= 0.1 * rel_tol * integral)) throw ToleranceError("quadrature tail did not become negligible");
    const double scale_value = scale.to_double();
    out.q = integral * scale_value;
    out.abs_error_est = (error + tail) * scale_value;
    out.p = 1.0 - out.q;
    out.abs_error_est = std::max(out.abs_error_est, 0.0);
    return out;
  }

  // P = int_0^y F_{mu-1}(x,t) dt; for mu < 1 the integrand is unbounded at 0,
  // so use P_mu = P_{mu+1} + F_mu with P_{mu+1} = int_0^y F_mu.
  const double nu = mu >= 1.0 ? mu - 1.0 : mu;
  LogScaled scale = f_kernel({nu, x, y});
  if (scale.is_zero()) scale = LogScaled::one();
  // Kronrod nodes are interior, so t = 0 is never sampled.
  auto integrand = [&](double t) { return kernel_ratio(nu, x, t, scale); };
  const QuadratureResult piece = integrate_gk15(integrand, 0.0, y, 0.0, rel_tol);
  if (!piece.converged) throw ToleranceError("quadrature did not reach the requested accuracy");
  double value = piece.value;
  if (mu < 1.0) value += kernel_ratio(mu, x, y, scale);
  const double scale_value = scale.to_double();
  out.p = value * scale_value;
  out.abs_error_est = piece.abs_error * scale_value;
  out.q = 1.0 - out.p;
  out.evaluations = piece.evaluations;
  return out;
}

OraclePair oracle_pq(const MarcumPoint& p, double target_abs_err) {
  require_point(p);
  if (!(p.mu > 0.0)) throw DomainError("oracle_q requires mu > 0");
  if (!(target_abs_err >= 1e-14)) throw DomainError("oracle_q requires target_abs_err >= 1e-14");
  OraclePair quad = q_by_quadrature(p, 1e-14);
  quad.abs_error_est += kUnitRoundoff;  // rounding in the complement
  if (quad.abs_error_est > target_abs_err) {
    throw ToleranceError("quadrature error estimate exceeds the target");
  }
  const EvalReport mixture = q_by_poisson_mixture(p);
  const double allowed = std::max(target_abs_err, 1e-13 * std::abs(quad.q)) + mixture.abs_error_est;
  if (!(std::abs(mixture.value - quad.q) <= allowed)) {
    throw ToleranceError("quadrature and Poisson mixture disagree at mu=" + std::to_string(p.mu) +
                         ", x=" + std::to_string(p.x) + ", y=" + std::to_string(p.y));
  }
  return quad;
}

EvalReport oracle_q(const MarcumPoint& p, double target_abs_err) {
  const OraclePair pair = oracle_pq(p, target_abs_err);
  EvalReport out;
  out.value = pair.q;
  out.abs_error_est = pair.abs_error_est;
  out.terms_used = pair.evaluations;
  out.method = Method::quadrature_oracle;
  return out;
}

double dq_dy(const MarcumPoint& p) {
  require_point(p);
  if (!(p.mu > 1.0)) throw DomainError("dQ/dy is provided for mu > 1");
  return -f_kernel({p.mu - 1.0, p.x, p.y}).to_double();
}

double dq_dx(const MarcumPoint& p) {
  require_point(p);
  if (!(p.mu > 0.0)) throw DomainError("dQ/dx is provided for mu > 0");
  return f_kernel(p).to_double();
}

double q_positivity_threshold(double mu0, double y) {
  if (!std::isfinite(mu0) || !std::isfinite(y)) throw DomainError("threshold arguments must be finite");
  if (!(mu0 > -1.0 && mu0 < 0.0)) throw DomainError("q_positivity_threshold requires mu0 in (-1, 0)");
  if (!(y > 0.0)) throw DomainError("q_positivity_threshold requires y > 0");
  const double a = std::hypot(y - mu0 - 2.0, 2.0 * std::sqrt(y));
  const double b = y + mu0;
  if (b <= 0.0) return (a - b) / (2.0 * y);
  // (a - b)(a + b) = 4((mu0 + 1) - mu0 y)
  return 2.0 * ((mu0 + 1.0) - mu0 * y) / (y * (a + b));
}

bool is_q_positive_guaranteed(const MarcumPoint& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  if (p.x < 0.0 || !(p.y > 0.0)) return false;
  const double mu = p.mu;
  if (mu > 0.0) return true;
  if (mu >= -2.0 && p.x * p.y >= 1.0) return true;
  // mu in [-2k, -2k+1], k >= 1 (endpoints included; at an integer order
  // with x = 0 the function vanishes, so x > 0 is required there).
  if (mu <= -1.0) {
    const double k = std::ceil(-mu / 2.0);
    const bool inside = mu >= -2.0 * k && mu <= -2.0 * k + 1.0;
    if (inside && (mu != std::floor(mu) || p.x > 0.0)) return true;
  }
  if (mu > -1.0 && mu < 0.0) return p.x >= q_positivity_threshold(mu, p.y);
  if (mu == 0.0) {
    // Limit of L_{mu0}(y) as mu0 -> 0^-; any mu0 < 0 close enough works when
    // x exceeds it strictly.
    const double limit = 2.0 / (p.y * (std::hypot(p.y - 2.0, 2.0 * std::sqrt(p.y)) + p.y));
    return p.x > limit;
  }
  return false;
}

}  // namespace marcum
