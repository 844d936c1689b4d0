#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace marcum {

/// A nonnegative real stored as mantissa * 2^exponent with the mantissa in
/// [1, 2), or exactly zero. Used wherever factors such as e^{-x-y} and
/// I_nu(2 sqrt(xy)) would individually leave the double range.
class LogScaled {
 public:
  constexpr LogScaled() = default;

  static LogScaled from_double(double value);
  static LogScaled from_long_double(long double value);
  /// Normalizes an arbitrary (mantissa, exponent) pair; mantissa >= 0.
  static LogScaled from_parts(double mantissa, std::int64_t exponent);

  static LogScaled one() { return from_parts(1.0, 0); }

  /// e^x for any finite x.
  static LogScaled exp(double x);
  /// base^power for base > 0 (base == 0 gives 0 for power > 0, 1 for power == 0).
  static LogScaled pow(double base, double power);
  /// |Gamma(a)| for a > 0 or a negative non-integer.
  static LogScaled gamma(double a);

  double mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0.0; }

  /// Nearest double; underflows to 0 and overflows to +inf.
  double to_double() const;
  long double to_long_double() const;
  /// Natural logarithm; -inf for zero.
  double log() const;

  LogScaled& operator*=(const LogScaled& rhs);
  LogScaled& operator/=(const LogScaled& rhs);
  LogScaled& operator+=(const LogScaled& rhs);
  /// Scales by a nonnegative double.
  LogScaled& operator*=(double factor);

  friend LogScaled operator*(LogScaled lhs, const LogScaled& rhs) { return lhs *= rhs; }
  friend LogScaled operator/(LogScaled lhs, const LogScaled& rhs) { return lhs /= rhs; }
  friend LogScaled operator+(LogScaled lhs, const LogScaled& rhs) { return lhs += rhs; }
  friend LogScaled operator*(LogScaled lhs, double factor) { return lhs *= factor; }

  friend bool operator==(const LogScaled&, const LogScaled&) = default;
  friend std::partial_ordering operator<=>(const LogScaled& lhs, const LogScaled& rhs);

  std::string to_string() const;

 private:
  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

}  // namespace marcum
