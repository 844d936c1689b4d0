#include <cmath>

#include "doctest.h"
#include "extended_oracle.hpp"
#include "marcum/bessel.hpp"
#include "marcum/errors.hpp"
#include "marcum/random.hpp"
#include "near.hpp"

using namespace marcum;
using testing_support::rel_diff;

namespace {

double oracle_scaled(double nu, double t) { return oracle::to_double(oracle::bessel_i_scaled(nu, t)); }

double oracle_ratio(double nu, double t) {
  return oracle::to_double(oracle::bessel_i_scaled(nu, t) / oracle::bessel_i_scaled(nu - 1, t));
}

}  // namespace

TEST_CASE("bessel_i_scaled: values at the origin") {
  CHECK(bessel_i_scaled(0.0, 0.0).to_double() == 1.0);
  CHECK(bessel_i_scaled(1.0, 0.0).to_double() == 0.0);
  CHECK(bessel_i_scaled(1.0, 0.0).is_zero());
}

TEST_CASE("bessel_i_scaled: nu = 2, t = 5 against the extended series") {
  CHECK(rel_diff(bessel_i_scaled(2.0, 5.0).to_double(), oracle_scaled(2.0, 5.0)) < 1e-13);
}

TEST_CASE("bessel_i_scaled: half-integer closed form") {
  // I_{-1/2}(t) = sqrt(2 / (pi t)) cosh t and I_{1/2}(t) = sqrt(2 / (pi t)) sinh t.
  const double pi = std::acos(-1.0);
  for (double t : {0.1, 1.0, 7.5, 40.0}) {
    const double scale = std::sqrt(2.0 / (pi * t));
    CHECK(rel_diff(bessel_i_scaled(-0.5, t).to_double(), scale * (1.0 + std::exp(-2.0 * t)) / 2.0) < 1e-13);
    CHECK(rel_diff(bessel_i_scaled(0.5, t).to_double(), scale * -std::expm1(-2.0 * t) / 2.0) < 1e-13);
  }
}

TEST_CASE("bessel_i_scaled: every regime against the extended series") {
  UniformStream rng(101);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double nu = rng.uniform(-1.0, 100.0);
    const double t = rng.uniform_open_low(0.0, 200.0);
    const double exact = oracle_scaled(nu, t);
    if (exact < 1e-290) continue;
    worst = std::max(worst, rel_diff(bessel_i_scaled(nu, t).to_double(), exact));
  }
  CHECK(worst < 1e-13);
  // Regime boundaries.
  for (double t : {9.999, 10.0, 10.001, 29.999, 30.0, 30.001, 500.0}) {
    for (double nu : {0.0, 0.3, 1.0, 12.5, 60.0}) {
      CHECK(rel_diff(bessel_i_scaled(nu, t).to_double(), oracle_scaled(nu, t)) < 1e-13);
    }
  }
}

TEST_CASE("bessel_i_scaled: tiny magnitudes survive in LogScaled form") {
  // e^{-1} I_300(1) is far below the double range.
  const LogScaled v = bessel_i_scaled(300.0, 1.0);
  CHECK_FALSE(v.is_zero());
  const double expected_log = oracle::to_double(log(oracle::bessel_i_scaled(300, 1)));
  CHECK(rel_diff(v.log(), expected_log) < 1e-13);
}

TEST_CASE("bessel_i_scaled: domain errors") {
  CHECK_THROWS_AS(bessel_i_scaled(-1.5, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_i_scaled(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(bessel_i_scaled(NAN, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_i_scaled(1.0, INFINITY), DomainError);
}

TEST_CASE("bessel_ratio: reference values") {
  CHECK(rel_diff(bessel_ratio(0.5, 1.0), std::tanh(1.0)) < 1e-13);
  CHECK(rel_diff(bessel_ratio(3.0, 0.001), 0.001 / 6.0) < 1e-6);
  CHECK(rel_diff(bessel_ratio(1.0, 2.0), oracle_ratio(1.0, 2.0)) < 1e-13);
}

TEST_CASE("bessel_ratio: random points against the extended series") {
  UniformStream rng(202);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double nu = rng.uniform(0.0, 100.0);
    const double t = rng.uniform_open_low(0.0, 200.0);
    const double r = bessel_ratio(nu, t);
    CHECK(r > 0.0);
    if (nu >= 0.5) CHECK(r < 1.0);
    if (nu >= 1e-3) worst = std::max(worst, rel_diff(r, oracle_ratio(nu, t)));
  }
  CHECK(worst < 1e-13);
  CHECK_THROWS_AS(bessel_ratio(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_ratio(1.0, 0.0), DomainError);
}

TEST_CASE("bessel_ratio_sequence: matches pointwise ratios") {
  const auto seq = bessel_ratio_sequence(1.5, 4.0, 6);
  REQUIRE(seq.size() == 6);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    CHECK(rel_diff(seq[k], bessel_ratio(1.5 + static_cast<double>(k), 4.0)) < 1e-14);
  }
}

TEST_CASE("bessel_ratio_bounds: reference values") {
  const RatioBoundPair b = bessel_ratio_bounds(1.0, 1.0);
  CHECK(rel_diff(b.lower, 1.0 / (1.0 + std::sqrt(2.0))) < 1e-15);
  const RatioBoundPair h = bessel_ratio_bounds(0.5, 1.0);
  REQUIRE(h.upper_half_shift.has_value());
  CHECK(*h.upper_half_shift == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::tanh(1.0) < *h.upper_half_shift);
  // nu = 0: the lower formula degenerates to t / sqrt(t^2) = 1, still below g_0(t) > 1.
  const RatioBoundPair z = bessel_ratio_bounds(0.0, 3.0);
  CHECK(z.lower == doctest::Approx(1.0));
  CHECK_FALSE(z.upper_half_shift.has_value());
  CHECK(bessel_ratio(0.0, 3.0) > 1.0);
  // I_{-1} = I_1 for the integer order.
  CHECK(rel_diff(bessel_ratio(0.0, 3.0), oracle::to_double(oracle::bessel_i_scaled(0, 3) /
                                                             oracle::bessel_i_scaled(1, 3))) < 1e-13);
}

TEST_CASE("bessel_ratio_bounds: sandwich on random points") {
  UniformStream rng(303);
  for (int i = 0; i < 10000; ++i) {
    const double nu = rng.uniform(0.0, 100.0);
    const double t = rng.uniform_open_low(0.0, 200.0);
    if (nu < 1e-9) continue;
    const double g = bessel_ratio(nu, t);
    const RatioBoundPair b = bessel_ratio_bounds(nu, t);
    CHECK(b.lower <= g * (1.0 + 1e-12));
    CHECK(g <= b.upper_general * (1.0 + 1e-12));
    if (nu >= 0.5) {
      REQUIRE(b.upper_half_shift.has_value());
      CHECK(g <= *b.upper_half_shift * (1.0 + 1e-12));
      CHECK(*b.upper_half_shift <= b.upper_general);
    }
  }
}

TEST_CASE("bessel_ratio: decreasing in the order") {
  for (double t : {0.01, 1.0, 10.0, 150.0}) {
    double previous = bessel_ratio(0.25, t);
    for (double nu = 0.5; nu < 60.0; nu += 0.75) {
      const double r = bessel_ratio(nu, t);
      CHECK(r < previous);
      previous = r;
    }
  }
}

TEST_CASE("ratio_bound_f: direct formula") {
  CHECK(ratio_bound_f(0.0, 2.0) == doctest::Approx(0.5));
  CHECK(ratio_bound_f(1.0, 1.0) == doctest::Approx(1.0 / (1.0 + std::sqrt(2.0))));
  // Negative lambda: same value as the naive formula, without cancellation.
  CHECK(ratio_bound_f(-2.0, 3.0) == doctest::Approx(1.0 / (-2.0 + std::sqrt(13.0))));
  CHECK(ratio_bound_f(-1e8, 1.0) == doctest::Approx(2e8));
}
