#pragma once

#include <stdexcept>
#include <string>

namespace marcum {

/// Argument outside the mathematical domain of the requested function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method (series, continued fraction) hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested accuracy could not be certified.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound formula was requested outside the region where it is defined.
class InvalidRegionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No inflection point exists for the requested axis and parameters.
class NoInflectionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace marcum
