#include <cmath>

#include "doctest.h"
#include "extended_oracle.hpp"
#include "marcum/bounds.hpp"
#include "marcum/central_gamma.hpp"
#include "marcum/errors.hpp"
#include "marcum/random.hpp"
#include "near.hpp"

using namespace marcum;
using testing_support::rel_diff;

TEST_CASE("incgamma_regularized: closed forms") {
  const IncGamma one = incgamma_regularized(1.0, 1.0);
  CHECK(rel_diff(one.p, 1.0 - std::exp(-1.0)) < 1e-14);
  CHECK(rel_diff(one.q, std::exp(-1.0)) < 1e-14);
  CHECK(rel_diff(incgamma_regularized(2.0, 2.0).q, 3.0 * std::exp(-2.0)) < 1e-14);
  const IncGamma g = incgamma_regularized(2.5, 3.7);
  CHECK(rel_diff(g.p, oracle::to_double(oracle::regularized_p(2.5, 3.7))) < 1e-13);
  CHECK(rel_diff(g.q, oracle::to_double(oracle::regularized_q(2.5, 3.7))) < 1e-13);
  CHECK_THROWS_AS(incgamma_regularized(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(incgamma_regularized(1.0, 0.0), DomainError);
}

TEST_CASE("incgamma_regularized: random points against the extended oracle") {
  UniformStream rng(606);
  double worst = 0.0;
  double worst_sum = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.uniform_open_low(0.0, 100.0);
    const double y = rng.uniform_open_low(0.0, 200.0);
    const IncGamma g = incgamma_regularized(a, y);
    const double p = oracle::to_double(oracle::regularized_p(a, y));
    const double q = oracle::to_double(oracle::regularized_q(a, y));
    worst_sum = std::max(worst_sum, std::abs(g.p + g.q - 1.0));
    if (std::min(p, q) < 1e-290) continue;
    worst = std::max(worst, p < q ? rel_diff(g.p, p) : rel_diff(g.q, q));
  }
  CHECK(worst < 1e-13);
  CHECK(worst_sum < 1e-14);
}

TEST_CASE("lower_gamma and upper_gamma: unnormalized values beyond the double range") {
  const LogScaled big = upper_gamma(300.0, 10.0);
  CHECK(rel_diff(big.log(), oracle::to_double(log(oracle::upper_gamma(300, 10)))) < 1e-14);
  CHECK(rel_diff(lower_gamma(3.0, 2.0).to_double(), oracle::to_double(oracle::lower_gamma(3, 2))) < 1e-14);
  // Gamma(a, y) for negative a by the upward recurrence: Gamma(0, y) = E_1(y).
  CHECK(rel_diff(upper_gamma(0.0, 1.0).to_double(), 0.21938393439552027) < 1e-13);
  // Gamma(-1/2, 1) = 2 e^{-1} - 2 sqrt(pi) erfc(1).
  const double expected = 2.0 * std::exp(-1.0) - 2.0 * std::sqrt(std::acos(-1.0)) * std::erfc(1.0);
  CHECK(rel_diff(upper_gamma(-0.5, 1.0).to_double(), expected) < 1e-13);
}

TEST_CASE("gamma_ratio_h and gamma_ratio_H") {
  for (double y : {0.1, 1.0, 7.0}) CHECK(rel_diff(gamma_ratio_H(2.0, y), 1.0 + y) < 1e-14);
  const double e = std::exp(-1.0);
  CHECK(rel_diff(gamma_ratio_h(2.0, 1.0), (1.0 - 2.0 * e) / (1.0 - e)) < 1e-14);
  CHECK(gamma_ratio_h(2.0, 1.0) == doctest::Approx(0.4180).epsilon(1e-3));
  CHECK(gamma_ratio_H(-0.5, 1.0) > 1.0);
  CHECK_THROWS_AS(gamma_ratio_h(1.0, 1.0), DomainError);
}

TEST_CASE("central_bound: closed-form examples") {
  const CentralBoundEvaluation u1 = central_bound(CentralBoundId::U1, {2.0, 3.0});
  CHECK(u1.valid);
  CHECK(rel_diff(u1.value, 4.5 * std::exp(-3.0)) < 1e-14);
  CHECK(4.0 * std::exp(-3.0) <= u1.value);

  const CentralBoundEvaluation l2 = central_bound(CentralBoundId::L2, {2.0, 3.0});
  const double expected = 18.0 * std::exp(-3.0) / (2.0 + std::sqrt(12.0));
  CHECK(rel_diff(l2.value, expected) < 1e-14);
  CHECK(l2.value <= 4.0 * std::exp(-3.0));

  const CentralBoundEvaluation l1 = central_bound(CentralBoundId::l1, {1.0, 1.0});
  CHECK(rel_diff(l1.value, 1.5 * std::exp(-1.0)) < 1e-14);
  CHECK(l1.value <= 1.0 - std::exp(-1.0));
}

TEST_CASE("central_bound: validity regions") {
  CHECK_FALSE(central_bound(CentralBoundId::u1, {2.0, 3.5}).valid);
  CHECK(central_bound(CentralBoundId::u1, {2.0, 2.5}).valid);
  CHECK_FALSE(central_bound(CentralBoundId::L1, {0.5, 1.0}).valid);
  CHECK_FALSE(central_bound(CentralBoundId::U1, {2.0, 0.5}).valid);
  CHECK_FALSE(central_bound(CentralBoundId::lH, {1.0, 1.0}).valid);
  CHECK(central_bound(CentralBoundId::L2, {-3.5, 2.0}).valid);
}

TEST_CASE("central_bound: l1 equals the MAS1 complement at x = 0") {
  for (double a : {0.5, 1.0, 3.0, 12.0}) {
    for (double y : {0.3, 2.0, 9.0}) {
      // l1 = y^a e^{-y} / a (1 + y / (a + 1)) and the complement of MAS1 is
      // (1 + c_{a+1}(0, y)) F_a(0, y) = Gamma(a) P-scaled the same way.
      const CentralBoundEvaluation l1 = central_bound(CentralBoundId::l1, {a, y});
      const BoundEvaluation mas1 = q_bound(BoundId::MAS1, {a, 0.0, y});
      REQUIRE(mas1.complement_value.has_value());
      const double normalized = l1.value / std::tgamma(a);
      CHECK(rel_diff(normalized, *mas1.complement_value) < 1e-13);
      CHECK(rel_diff(c_coefficient({a, 0.0, y}, 1), y / (a + 1.0)) < 1e-13);
    }
  }
}

TEST_CASE("central_bound: all valid bounds hold against the extended oracle") {
  UniformStream rng(707);
  for (int i = 0; i < 400; ++i) {
    const double a = rng.uniform_open_low(0.0, 100.0);
    const double y = rng.uniform_open_low(0.0, 200.0);
    const oracle::Real lower = oracle::lower_gamma(a, y);
    const oracle::Real upper = oracle::upper_gamma(a, y);
    for (int k = 0; k <= static_cast<int>(CentralBoundId::b1_merkle); ++k) {
      const auto id = static_cast<CentralBoundId>(k);
      const CentralBoundEvaluation b = central_bound(id, {a, y});
      if (!b.valid) continue;
      const oracle::Real& exact = b.target == CentralTarget::gamma_lower_inc ? lower : upper;
      if (exact < 1e-290) continue;
      CAPTURE(a);
      CAPTURE(y);
      CAPTURE(to_string(id));
      const double ratio = oracle::to_double(b.value / exact);
      if (b.side == Side::lower) {
        CHECK(ratio <= 1.0 + 1e-12);
      } else {
        CHECK(ratio >= 1.0 - 1e-12);
      }
    }
  }
}

TEST_CASE("central_bound: six-term l1 is at least as sharp as two terms") {
  for (double a : {1.5, 3.0, 8.0}) {
    for (double y : {0.5, 2.0, 6.0}) {
      const double two = central_bound(CentralBoundId::l1, {a, y}, 2).value;
      const double six = central_bound(CentralBoundId::l1, {a, y}, 6).value;
      CHECK(six >= two);
      CHECK(six <= oracle::to_double(oracle::lower_gamma(a, y)) * (1 + 1e-13));
    }
  }
}

TEST_CASE("turan_gamma_check: reference bounds") {
  const TuranCheck low = turan_gamma_check({2.0, 1.0}, GammaFamily::lower_incomplete);
  CHECK(low.lower_ref == doctest::Approx(0.5));
  CHECK(low.upper_ref == doctest::Approx(0.75));
  CHECK(low.ratio > 0.5);
  CHECK(low.ratio < 0.75);
  const TuranCheck up = turan_gamma_check({2.0, 1.0}, GammaFamily::upper_incomplete);
  CHECK(up.ratio > 0.5);
  CHECK(up.ratio < 1.0);
  // Gamma(2,y)^2 / (Gamma(3,y) Gamma(1,y)) = (1+y)^2 / (y^2 + 2y + 2) -> 1.
  const TuranCheck far = turan_gamma_check({2.0, 50.0}, GammaFamily::upper_incomplete);
  CHECK(rel_diff(far.ratio, 51.0 * 51.0 / (2500.0 + 100.0 + 2.0)) < 1e-13);
  CHECK(far.ratio > 0.999);
  CHECK_THROWS_AS(turan_gamma_check({1.0, 1.0}, GammaFamily::lower_incomplete), DomainError);
}

TEST_CASE("uq_crossing") {
  CHECK(uq_crossing(10.0, 5.0));
  CHECK_FALSE(uq_crossing(2.0, 10.0));
  const double u1 = central_bound(CentralBoundId::u1, {5.0, 5.9}).value;
  const double uq = central_bound(CentralBoundId::UQ, {5.0, 5.9}).value;
  CHECK(uq_crossing(5.0, 5.9) == (u1 < uq));
}

TEST_CASE("monotonicity_probe: documented orders") {
  const MonotonicityProbe p = monotonicity_probe(MonotoneFamily::p_a, 2.0, 3.0, 1.0);
  CHECK(p.holds());
  CHECK(monotonicity_probe(MonotoneFamily::H_a, 1.5, 2.5, 2.0).holds());
  const MonotonicityProbe h = monotonicity_probe(MonotoneFamily::h_over_am1, 2.0, 3.0, 1.0);
  CHECK_FALSE(h.expect_increasing);
  CHECK(h.holds());
  CHECK(rel_diff(h.first, gamma_ratio_h(2.0, 1.0)) < 1e-14);
  CHECK(rel_diff(h.second, gamma_ratio_h(3.0, 1.0) / 2.0) < 1e-14);
  CHECK(parse_monotone_family("H_over_am1") == MonotoneFamily::H_over_am1);
}

TEST_CASE("central bound ids round-trip through their names") {
  for (int k = 0; k <= static_cast<int>(CentralBoundId::p_ratio); ++k) {
    const auto id = static_cast<CentralBoundId>(k);
    CHECK(parse_central_bound_id(to_string(id)) == id);
  }
}
