#include <cmath>
#include <limits>

#include "doctest.h"
#include "marcum/log_scaled.hpp"
#include "near.hpp"

using marcum::LogScaled;
using testing_support::rel_diff;

TEST_CASE("log_scaled: normalization keeps the mantissa in [1, 2)") {
  for (double v : {1.0, 3.0, 0.75, 1e-300, 1e300, 5e-324, 123456.789}) {
    const LogScaled s = LogScaled::from_double(v);
    CHECK(s.mantissa() >= 1.0);
    CHECK(s.mantissa() < 2.0);
    CHECK(s.to_double() == v);
  }
  const LogScaled zero = LogScaled::from_double(0.0);
  CHECK(zero.is_zero());
  CHECK(zero.mantissa() == 0.0);
  CHECK(zero.to_double() == 0.0);
  CHECK(zero.log() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("log_scaled: normalization is unique") {
  CHECK(LogScaled::from_parts(4.0, 0) == LogScaled::from_parts(1.0, 2));
  CHECK(LogScaled::from_parts(0.5, 3) == LogScaled::from_double(4.0));
}

TEST_CASE("log_scaled: products beyond the double range stay exact") {
  const LogScaled big = LogScaled::exp(2000.0);
  const LogScaled small = LogScaled::exp(-2000.0);
  CHECK(std::isinf(std::exp(2000.0)));
  CHECK(rel_diff((big * small).to_double(), 1.0) < 1e-13);
  CHECK(rel_diff(big.log(), 2000.0) < 1e-15);
  CHECK(rel_diff((big / big).to_double(), 1.0) < 1e-15);
  CHECK((small * small).to_double() == 0.0);
}

TEST_CASE("log_scaled: addition and ordering") {
  const LogScaled a = LogScaled::from_double(3.0);
  const LogScaled b = LogScaled::from_double(5.0);
  CHECK((a + b).to_double() == 8.0);
  CHECK(a < b);
  CHECK(LogScaled::exp(-800.0) < LogScaled::exp(-799.0));
  CHECK(LogScaled::from_double(0.0) < a);
  CHECK(rel_diff((LogScaled::exp(-1000.0) + LogScaled::exp(-1000.0)).log(), -1000.0 + std::log(2.0)) < 1e-15);
  CHECK((a * 0.5).to_double() == 1.5);
}

TEST_CASE("log_scaled: pow and gamma") {
  CHECK(rel_diff(LogScaled::pow(2.0, 10.0).to_double(), 1024.0) < 1e-15);
  CHECK(rel_diff(LogScaled::pow(200.0, 100.0).log(), 100.0 * std::log(200.0)) < 1e-14);
  CHECK(rel_diff(LogScaled::gamma(5.0).to_double(), 24.0) < 1e-14);
  CHECK(rel_diff(LogScaled::gamma(0.5).to_double(), std::sqrt(std::acos(-1.0))) < 1e-14);
  CHECK(rel_diff(LogScaled::gamma(300.0).log(), std::lgamma(300.0)) < 1e-14);
}
