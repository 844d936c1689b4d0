#include <cmath>

#include "doctest.h"
#include "extended_oracle.hpp"
#include "marcum/errors.hpp"
#include "marcum/marcum.hpp"
#include "marcum/random.hpp"
#include "near.hpp"

using namespace marcum;
using testing_support::rel_diff;

namespace {

double oracle_q(double mu, double x, double y) { return oracle::to_double(oracle::marcum_q(mu, x, y)); }
double oracle_p(double mu, double x, double y) { return oracle::to_double(oracle::marcum_p(mu, x, y)); }
double oracle_f(double mu, double x, double y) { return oracle::to_double(oracle::f_kernel(mu, x, y)); }

}  // namespace

TEST_CASE("f_kernel: central limits and a Bessel point") {
  CHECK(rel_diff(f_kernel({0.0, 0.0, 1.0}).to_double(), std::exp(-1.0)) < 1e-15);
  CHECK(rel_diff(f_kernel({1.0, 0.0, 2.0}).to_double(), 2.0 * std::exp(-2.0)) < 1e-15);
  const double i1_2 = oracle::to_double(oracle::bessel_i_scaled(1, 2));  // e^{-2} I_1(2)
  CHECK(rel_diff(f_kernel({1.0, 1.0, 1.0}).to_double(), i1_2) < 1e-12);
}

TEST_CASE("f_kernel: random points against the extended kernel") {
  UniformStream rng(404);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double mu = rng.uniform(-1.0, 60.0);
    const double x = rng.uniform(0.0, 100.0);
    const double y = rng.uniform_open_low(0.0, 100.0);
    const double exact = oracle_f(mu, x, y);
    if (exact < 1e-290) continue;
    worst = std::max(worst, rel_diff(f_kernel({mu, x, y}).to_double(), exact));
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(f_kernel({-1.5, 1.0, 1.0}), DomainError);
}

TEST_CASE("c_coefficient: limits and Bessel ratio") {
  CHECK(c_coefficient({1.0, 0.0, 2.0}, 0) == 2.0);
  const double ratio = oracle::to_double(oracle::bessel_i_scaled(1, 2) / oracle::bessel_i_scaled(0, 2));
  CHECK(rel_diff(c_coefficient({1.0, 1.0, 1.0}, 0), ratio) < 1e-13);
  CHECK(c_coefficient({5.0, 3.0, 1e-12}, 0) < 1e-11);
  CHECK(rel_diff(c_coefficient({1.0, 0.0, 2.0}, 2), 2.0 / 3.0) < 1e-15);
  CHECK_THROWS_AS(c_coefficient({1.0, 1.0, 1.0}, -2), DomainError);
  CHECK_THROWS_AS(c_coefficient({0.0, 0.0, 1.0}, 0), DomainError);
}

TEST_CASE("marcum_p: closed forms and complementarity") {
  const EvalReport central = marcum_p({1.0, 0.0, 1.0});
  CHECK(rel_diff(central.value, 1.0 - std::exp(-1.0)) < 1e-14);
  const double p = marcum_p({1.0, 1.0, 1.0}).value;
  const double q = marcum_q({1.0, 1.0, 1.0}).value;
  CHECK(std::abs(p + q - 1.0) <= 1e-12);
  const EvalReport r = marcum_p({2.0, 3.0, 4.0});
  CHECK(rel_diff(r.value, oracle_p(2.0, 3.0, 4.0)) < 1e-13);
  CHECK(r.terms_used > 0);
  CHECK(r.abs_error_est >= 0.0);
  CHECK_THROWS_AS(marcum_p({0.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(marcum_p({-1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("marcum_q: particular values") {
  CHECK(marcum_q({3.0, 5.0, 1e-300}).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_diff(marcum_q({1.0, 0.0, 2.0}).value, std::exp(-2.0)) < 1e-14);
  CHECK(rel_diff(marcum_q({16.0, 16.0, 64.0}).value, oracle_q(16.0, 16.0, 64.0)) < 1e-12);
}

TEST_CASE("marcum_q and marcum_p: random points against the extended mixture") {
  UniformStream rng(505);
  double worst_abs = 0.0;
  double worst_tail = 0.0;
  for (int i = 0; i < 120; ++i) {
    const double mu = rng.uniform(0.5, 50.0);
    const double x = rng.uniform(0.0, 100.0);
    const double y = rng.uniform_open_low(0.0, 100.0);
    const double q_ref = oracle_q(mu, x, y);
    const double p_ref = oracle_p(mu, x, y);
    const double q = marcum_q({mu, x, y}).value;
    const double p = marcum_p({mu, x, y}).value;
    worst_abs = std::max({worst_abs, std::abs(q - q_ref), std::abs(p - p_ref)});
    // The smaller tail is the one computed directly and must be accurate relatively.
    const double smaller = std::min(q_ref, p_ref);
    if (smaller > 1e-290) {
      worst_tail = std::max(worst_tail, q_ref < p_ref ? rel_diff(q, q_ref) : rel_diff(p, p_ref));
    }
  }
  CHECK(worst_abs < 1e-13);
  CHECK(worst_tail < 1e-11);
}

TEST_CASE("q_by_poisson_mixture: agrees with the series and tolerates negative orders") {
  CHECK(std::abs(q_by_poisson_mixture({2.0, 3.0, 4.0}).value - oracle_q(2.0, 3.0, 4.0)) < 1e-14);
  // Q_{-0.5}(x, y) = Q_{0.5}(x, y) - F_{-0.5}(x, y) by the order recurrence.
  const double lhs = q_by_poisson_mixture({-0.5, 2.0, 3.0}).value;
  const double rhs = marcum_q({0.5, 2.0, 3.0}).value - f_kernel({-0.5, 2.0, 3.0}).to_double();
  CHECK(rel_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("oracle_q: closed form and mixture agreement") {
  const EvalReport central = oracle_q({1.0, 0.0, 1.0});
  CHECK(rel_diff(central.value, std::exp(-1.0)) < 1e-14);
  CHECK(central.method == Method::quadrature_oracle);
  for (const MarcumPoint p : {MarcumPoint{1.0, 1.0, 1.0}, MarcumPoint{1.0, 1.0, 16.0}, MarcumPoint{16.0, 1.0, 1.0}}) {
    const EvalReport o = oracle_q(p);
    CHECK(o.abs_error_est <= 1e-14);
    CHECK(std::abs(o.value - q_by_poisson_mixture(p).value) <= 1e-13);
    CHECK(std::abs(o.value - oracle_q(p.mu, p.x, p.y)) <= 1e-14);
  }
  const OraclePair pq = oracle_pq({1.0, 1.0, 16.0});
  CHECK(rel_diff(pq.q, oracle_q(1.0, 1.0, 16.0)) < 1e-12);
  CHECK(std::abs(pq.p + pq.q - 1.0) < 1e-15);
  CHECK_THROWS_AS(oracle_q({1.0, 1.0, 1.0}, 1e-16), DomainError);
}

TEST_CASE("dq_dy and dq_dx: recurrence identities") {
  CHECK(rel_diff(dq_dy({2.0, 1.0, 1.0}), -f_kernel({1.0, 1.0, 1.0}).to_double()) < 1e-15);
  CHECK(rel_diff(dq_dx({1.0, 1.0, 1.0}), f_kernel({1.0, 1.0, 1.0}).to_double()) < 1e-15);
  const double h = 1e-4;
  const double fd = (marcum_q({2.0, 3.0, 4.0 + h}).value - marcum_q({2.0, 3.0, 4.0 - h}).value) / (2.0 * h);
  CHECK(std::abs(dq_dy({2.0, 3.0, 4.0}) - fd) < 1e-6);
  const double fdx = (marcum_q({2.0, 3.0 + h, 4.0}).value - marcum_q({2.0, 3.0 - h, 4.0}).value) / (2.0 * h);
  CHECK(std::abs(dq_dx({2.0, 3.0, 4.0}) - fdx) < 1e-6);
  CHECK_THROWS_AS(dq_dy({1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(dq_dx({0.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("q_positivity_threshold: formula and guarantee") {
  CHECK(rel_diff(q_positivity_threshold(-0.5, 1.0), (std::sqrt(4.25) - 0.5) / 2.0) < 1e-15);
  const double far = q_positivity_threshold(-1e-6, 1e4);
  CHECK(far > 0.0);
  CHECK(far < q_positivity_threshold(-1e-6, 10.0));
  const double l = q_positivity_threshold(-0.5, 10.0);
  CHECK(q_by_poisson_mixture({-0.5, l + 0.01, 10.0}).value > 0.0);
  CHECK_THROWS_AS(q_positivity_threshold(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(q_positivity_threshold(-0.5, 0.0), DomainError);
}

TEST_CASE("is_q_positive_guaranteed: sufficient conditions") {
  CHECK(is_q_positive_guaranteed({-1.5, 2.0, 3.0}));
  CHECK(is_q_positive_guaranteed({0.5, 0.0, 1.0}));
  CHECK_FALSE(is_q_positive_guaranteed({-0.5, 0.0, 1.0}));
  // The central value really is negative there: Q_{-1/2}(y) = Q_{1/2}(y) - y^{-1/2} e^{-y} / Gamma(1/2).
  const double pi = std::acos(-1.0);
  const double expected = std::erfc(1.0) - std::exp(-1.0) / std::sqrt(pi);
  const double q = q_by_poisson_mixture({-0.5, 0.0, 1.0}).value;
  CHECK(q < 0.0);
  CHECK(rel_diff(q, expected) < 1e-13);
}
