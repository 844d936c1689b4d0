#include <cmath>

#include "doctest.h"
#include "marcum/convexity.hpp"
#include "marcum/errors.hpp"
#include "marcum/marcum.hpp"

using namespace marcum;

namespace {

double second_difference(const MarcumPoint& p, Axis axis, double h) {
  auto q = [&](double shift) {
    MarcumPoint s = p;
    (axis == Axis::x ? s.x : s.y) += shift;
    return marcum_q(s).value;
  };
  return (q(h) - 2.0 * q(0.0) + q(-h)) / (h * h);
}

}  // namespace

TEST_CASE("d2q_dx2_classify: regions") {
  CHECK(d2q_dx2_classify({1.0, 0.3, 1.5}).sign == Sign::negative);
  CHECK(d2q_dx2_classify({1.0, 1.0, 5.0}).sign == Sign::positive);
  const SignRegion mid = d2q_dx2_classify({1.0, 3.2, 5.0});
  CHECK(mid.sign == Sign::indeterminate);
  REQUIRE(mid.bracket.has_value());
  CHECK(mid.bracket->lo == doctest::Approx(3.0));
  CHECK(mid.bracket->hi == doctest::Approx(3.5));
  CHECK(d2q_dx2_classify({1.0, 3.6, 5.0}).sign == Sign::negative);
  const SignRegion edge = d2q_dx2_classify({1.0, 0.0, 2.0});
  CHECK(edge.sign == Sign::negative);
  CHECK(edge.boundary_point);
  CHECK_FALSE(d2q_dx2_classify({1.0, 0.5, 2.0}).boundary_point);
  CHECK_THROWS_AS(d2q_dx2_classify({-0.5, 1.0, 1.0}), DomainError);
}

TEST_CASE("d2q_dy2_classify: regions") {
  CHECK(d2q_dy2_classify({2.0, 1.0, 5.0}).sign == Sign::positive);
  CHECK(d2q_dy2_classify({2.0, 3.0, 2.9}).sign == Sign::negative);
  const SignRegion mid = d2q_dy2_classify({2.0, 3.0, 3.8});
  CHECK(mid.sign == Sign::indeterminate);
  REQUIRE(mid.bracket.has_value());
  CHECK(mid.bracket->lo == doctest::Approx(3.5));
  CHECK(mid.bracket->hi == doctest::Approx(4.0));
  // Below mu = 3/2 only the weaker edge x + mu - 2 is available.
  const SignRegion weak = d2q_dy2_classify({1.2, 3.0, 2.5});
  CHECK(weak.sign == Sign::indeterminate);
  CHECK(weak.bracket->lo == doctest::Approx(2.2));
  CHECK_THROWS_AS(d2q_dy2_classify({0.5, 1.0, 1.0}), DomainError);
}

TEST_CASE("classification agrees with finite differences away from the brackets") {
  CHECK(second_difference({1.0, 0.3, 1.5}, Axis::x, 1e-3) < 0.0);
  CHECK(second_difference({1.0, 1.0, 5.0}, Axis::x, 1e-3) > 0.0);
  CHECK(second_difference({2.0, 1.0, 5.0}, Axis::y, 1e-3) > 0.0);
  CHECK(second_difference({2.0, 3.0, 2.9}, Axis::y, 1e-3) < 0.0);
}

TEST_CASE("find_inflection: roots inside the brackets") {
  const double x_star = find_inflection({1.0, 0.0, 5.0}, Axis::x);
  CHECK(x_star >= 3.0);
  CHECK(x_star <= 3.5);
  CHECK(std::abs(c_coefficient({1.0, x_star, 5.0}, 1) - 1.0) < 1e-9);
  CHECK(second_difference({1.0, x_star - 0.05, 5.0}, Axis::x, 1e-2) > 0.0);
  CHECK(second_difference({1.0, x_star + 0.05, 5.0}, Axis::x, 1e-2) < 0.0);

  const double y_star = find_inflection({2.0, 3.0, 0.0}, Axis::y);
  CHECK(y_star >= 3.5);
  CHECK(y_star <= 4.0);
  CHECK(second_difference({2.0, 3.0, y_star - 0.05}, Axis::y, 1e-2) < 0.0);
  CHECK(second_difference({2.0, 3.0, y_star + 0.05}, Axis::y, 1e-2) > 0.0);

  const double coarse = find_inflection({1.0, 0.0, 5.0}, Axis::x, 1e-4);
  CHECK(std::abs(coarse - x_star) <= 1e-4);
}

TEST_CASE("find_inflection: refusals and errors") {
  CHECK_THROWS_AS(find_inflection({1.0, 0.0, 1.5}, Axis::x), NoInflectionError);
  CHECK_THROWS_AS(find_inflection({0.5, 1.0, 0.0}, Axis::y), NoInflectionError);
  CHECK_THROWS_AS(find_inflection({1.0, 0.0, 0.0}, Axis::y), NoInflectionError);
  CHECK_THROWS_AS(find_inflection({-0.5, 1.0, 0.0}, Axis::y), DomainError);
  CHECK_THROWS_AS(find_inflection({1.0, 0.0, 5.0}, Axis::x, 1e-13), DomainError);
  // mu = 1 on the y-axis has a root once x > 1.
  const double y_star = find_inflection({1.0, 2.0, 0.0}, Axis::y);
  CHECK(y_star > 0.0);
  CHECK(y_star <= 2.0);
}
