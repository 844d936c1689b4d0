#include "marcum/log_scaled.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "marcum/errors.hpp"

namespace marcum {

namespace {

// Largest |x| for which expl / powl results stay well inside the
// long double range.
constexpr long double kLongDoubleExpLimit = 11000.0L;
constexpr long double kLn2 = 0.693147180559945309417232121458176568L;

LogScaled exp_large(long double x) {
  // e^x = 2^n * e^r with |r| <= ln2/2; the reduction is done in long double
  // so r keeps ~19 digits for |x| up to ~1e6.
  const long double n = std::nearbyint(x / kLn2);
  const long double r = x - n * kLn2;
  return LogScaled::from_long_double(std::exp(r)) *
         LogScaled::from_parts(1.0, static_cast<std::int64_t>(n));
}

}  // namespace

LogScaled LogScaled::from_double(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError("LogScaled requires a finite nonnegative value");
  }
  LogScaled out;
  if (value == 0.0) return out;
  int e = 0;
  const double m = std::frexp(value, &e);
  out.mantissa_ = 2.0 * m;
  out.exponent_ = e - 1;
  return out;
}

LogScaled LogScaled::from_long_double(long double value) {
  if (!(value >= 0.0L) || !std::isfinite(value)) {
    throw DomainError("LogScaled requires a finite nonnegative value");
  }
  LogScaled out;
  if (value == 0.0L) return out;
  int e = 0;
  const long double m = std::frexp(value, &e);
  // Rounding 2m to double can produce exactly 2.0.
  return from_parts(static_cast<double>(2.0L * m), static_cast<std::int64_t>(e) - 1);
}

LogScaled LogScaled::from_parts(double mantissa, std::int64_t exponent) {
  if (!(mantissa >= 0.0) || !std::isfinite(mantissa)) {
    throw DomainError("LogScaled mantissa must be finite and nonnegative");
  }
  LogScaled out;
  if (mantissa == 0.0) return out;
  int e = 0;
  const double m = std::frexp(mantissa, &e);
  out.mantissa_ = 2.0 * m;
  out.exponent_ = exponent + e - 1;
  return out;
}

LogScaled LogScaled::exp(double x) {
  if (!std::isfinite(x)) throw DomainError("LogScaled::exp requires a finite argument");
  const long double lx = x;
  if (std::abs(lx) < kLongDoubleExpLimit) return from_long_double(std::exp(lx));
  return exp_large(lx);
}

LogScaled LogScaled::pow(double base, double power) {
  if (!(base >= 0.0) || !std::isfinite(base) || !std::isfinite(power)) {
    throw DomainError("LogScaled::pow requires base >= 0 and finite inputs");
  }
  if (power == 0.0) return one();
  if (base == 0.0) {
    if (power > 0.0) return {};
    throw DomainError("LogScaled::pow: zero base with negative power");
  }
  // Split base = m 2^k so that powl(m, power) never overflows; the integer
  // part of k*power is carried exactly in the exponent.
  int k = 0;
  const long double m = std::frexp(static_cast<long double>(base), &k);
  const long double kp = static_cast<long double>(k) * power;
  const long double kp_int = std::floor(kp);
  const long double log2_mantissa_part = power * std::log2(m) + (kp - kp_int);
  if (std::abs(log2_mantissa_part) < kLongDoubleExpLimit) {
    const long double head = std::pow(m, static_cast<long double>(power)) * std::exp2(kp - kp_int);
    if (std::isfinite(head) && head > 0.0L) {
      return from_long_double(head) * from_parts(1.0, static_cast<std::int64_t>(kp_int));
    }
  }
  return exp_large(log2_mantissa_part * kLn2) *
         from_parts(1.0, static_cast<std::int64_t>(kp_int));
}

LogScaled LogScaled::gamma(double a) {
  if (!std::isfinite(a)) throw DomainError("LogScaled::gamma requires a finite argument");
  if (a <= 0.0 && a == std::floor(a)) throw DomainError("Gamma has poles at nonpositive integers");
  const long double la = a;
  if (a < 1700.0) return from_long_double(std::abs(std::tgamma(la)));
  return exp_large(std::lgamma(la));
}

double LogScaled::to_double() const {
  if (is_zero()) return 0.0;
  if (exponent_ > std::numeric_limits<int>::max() / 2) return std::numeric_limits<double>::infinity();
  if (exponent_ < std::numeric_limits<int>::min() / 2) return 0.0;
  return std::ldexp(mantissa_, static_cast<int>(exponent_));
}

long double LogScaled::to_long_double() const {
  if (is_zero()) return 0.0L;
  if (exponent_ > std::numeric_limits<int>::max() / 2) return std::numeric_limits<long double>::infinity();
  if (exponent_ < std::numeric_limits<int>::min() / 2) return 0.0L;
  return std::ldexp(static_cast<long double>(mantissa_), static_cast<int>(exponent_));
}

double LogScaled::log() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(std::log(static_cast<long double>(mantissa_)) +
                             static_cast<long double>(exponent_) * kLn2);
}

LogScaled& LogScaled::operator*=(const LogScaled& rhs) {
  if (is_zero() || rhs.is_zero()) {
    *this = {};
    return *this;
  }
  *this = from_parts(mantissa_ * rhs.mantissa_, exponent_ + rhs.exponent_);
  return *this;
}

LogScaled& LogScaled::operator/=(const LogScaled& rhs) {
  if (rhs.is_zero()) throw DomainError("LogScaled division by zero");
  if (is_zero()) return *this;
  *this = from_parts(mantissa_ / rhs.mantissa_, exponent_ - rhs.exponent_);
  return *this;
}

LogScaled& LogScaled::operator+=(const LogScaled& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) {
    *this = rhs;
    return *this;
  }
  const LogScaled& big = exponent_ >= rhs.exponent_ ? *this : rhs;
  const LogScaled& small = exponent_ >= rhs.exponent_ ? rhs : *this;
  const std::int64_t shift = big.exponent_ - small.exponent_;
  const double tail = shift > 1100 ? 0.0 : std::ldexp(small.mantissa_, -static_cast<int>(shift));
  *this = from_parts(big.mantissa_ + tail, big.exponent_);
  return *this;
}

LogScaled& LogScaled::operator*=(double factor) {
  return *this *= from_double(factor);
}

std::partial_ordering operator<=>(const LogScaled& lhs, const LogScaled& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return lhs.mantissa_ <=> rhs.mantissa_;
  if (lhs.exponent_ != rhs.exponent_) return lhs.exponent_ <=> rhs.exponent_;
  return lhs.mantissa_ <=> rhs.mantissa_;
}

std::string LogScaled::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << mantissa_ << "*2^" << exponent_;
  return os.str();
}

}  // namespace marcum
