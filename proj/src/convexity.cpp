#include "marcum/convexity.hpp"

#include <cmath>

#include "marcum/errors.hpp"

namespace marcum {

namespace {

constexpr int kMaxBisections = 200;
constexpr double kSmallestY = 1e-300;

void require_finite(const MarcumPoint& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw DomainError("convexity analysis requires finite arguments");
  }
}

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must have
/// opposite signs (zero counts as either).
template <typename Function>
double bisect(Function&& f, double lo, double hi, double tol) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw ConvergenceError("the inflection bracket does not contain a sign change");
  }
  const bool rising = f_lo < 0.0;
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * tol || mid <= lo || mid >= hi) return mid;
    const double value = f(mid);
    if (value == 0.0) return mid;
    if ((value < 0.0) == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ToleranceError("bisection did not reach the requested tolerance");
}

}  // namespace

std::string_view to_string(Sign sign) {
  switch (sign) {
    case Sign::negative: return "negative";
    case Sign::positive: return "positive";
    case Sign::indeterminate: return "indeterminate";
  }
  return "unknown";
}

SignRegion d2q_dx2_classify(const MarcumPoint& p) {
  require_finite(p);
  if (p.mu < 0.0) throw DomainError("d2q_dx2_classify requires mu >= 0");
  if (p.x < 0.0 || !(p.y > 0.0)) throw DomainError("d2q_dx2_classify requires x >= 0 and y > 0");
  SignRegion out;
  const double mu = p.mu;
  if (p.y <= mu + 1.0) {
    out.sign = Sign::negative;
    out.boundary_point = p.x == 0.0 && p.y == mu + 1.0;
    return out;
  }
  if (p.x > p.y - mu - 0.5) {
    out.sign = Sign::negative;
    return out;
  }
  if (p.x < p.y - mu - 1.0) {
    out.sign = Sign::positive;
    return out;
  }
  out.sign = Sign::indeterminate;
  out.bracket = Interval{p.y - mu - 1.0, p.y - mu - 0.5};
  return out;
}

SignRegion d2q_dy2_classify(const MarcumPoint& p) {
  require_finite(p);
  if (p.mu < 1.0) throw DomainError("d2q_dy2_classify requires mu >= 1");
  if (p.x < 0.0 || !(p.y > 0.0)) throw DomainError("d2q_dy2_classify requires x >= 0 and y > 0");
  SignRegion out;
  const double upper_edge = p.x + p.mu - 1.0;
  const double lower_edge = p.mu >= 1.5 ? p.x + p.mu - 1.5 : p.x + p.mu - 2.0;
  if (p.y > upper_edge) {
    out.sign = Sign::positive;
  } else if (p.y < lower_edge) {
    out.sign = Sign::negative;
  } else {
    out.sign = Sign::indeterminate;
    out.bracket = Interval{lower_edge, upper_edge};
  }
  return out;
}

double find_inflection(const MarcumPoint& p, Axis axis, double tol) {
  require_finite(p);
  if (!(tol >= 1e-12)) throw DomainError("find_inflection requires tol >= 1e-12");
  const double mu = p.mu;
  if (axis == Axis::x) {
    if (mu < 0.0) throw DomainError("the x-axis inflection requires mu >= 0");
    if (!(p.y > mu + 1.0)) {
      throw NoInflectionError("no inflection in x: Q is concave in x when y <= mu + 1");
    }
    // c_{mu+1}(x, y) decreases in x from y/(mu+1) > 1 at x = 0.
    auto g = [&](double x) { return c_coefficient({mu, x, p.y}, 1) - 1.0; };
    const double lo = std::max(0.0, p.y - mu - 1.0);
    const double hi = p.y - mu - 0.5;
    return bisect(g, lo, hi, tol);
  }
  if (mu < 0.0) throw DomainError("the y-axis inflection requires mu >= 0");
  if (mu < 1.0) {
    throw NoInflectionError("the y-axis inflection is not unique for mu < 1 and is not computed");
  }
  if (p.x < 0.0) throw DomainError("find_inflection requires x >= 0");
  if (mu == 1.0 && !(p.x > 1.0)) {
    // c_0(x, 0+) = 1/x >= 1 and c_0 increases in y: no sign change.
    throw NoInflectionError("no inflection in y for mu = 1 unless x > 1");
  }
  auto g = [&](double y) { return c_coefficient({mu, p.x, y}, -1) - 1.0; };
  const double lower_edge = mu >= 1.5 ? p.x + mu - 1.5 : p.x + mu - 2.0;
  const double lo = std::max(kSmallestY, lower_edge);
  const double hi = p.x + mu - 1.0;
  if (!(hi > 0.0)) throw NoInflectionError("no inflection in y: bracket lies at y <= 0");
  return bisect(g, lo, hi, tol);
}

}  // namespace marcum
