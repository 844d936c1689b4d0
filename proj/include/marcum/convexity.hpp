#pragma once

#include <optional>
#include <string_view>

#include "marcum/marcum.hpp"

namespace marcum {

enum class Sign { negative, positive, indeterminate };

std::string_view to_string(Sign sign);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sign of a second derivative of Q over a region, with the bracket for the
/// inflection coordinate when the sign is not determined.
struct SignRegion {
  Sign sign = Sign::indeterminate;
  std::optional<Interval> bracket;
  /// True at x = 0, y = mu + 1, where the x-derivative vanishes exactly.
  bool boundary_point = false;
};

/// Sign of d^2Q/dx^2 = (c_{mu+1} - 1) F_mu, mu >= 0.
SignRegion d2q_dx2_classify(const MarcumPoint& p);

/// Sign of d^2Q/dy^2 = (c_{mu-1} - 1) F_{mu-2}, mu >= 1.
SignRegion d2q_dy2_classify(const MarcumPoint& p);

enum class Axis { x, y };

inline constexpr double kDefaultInflectionTolerance = 1e-10;

/// Locates the inflection point along the given axis by bisection on the
/// monotone function c_{mu+1} - 1 (x-axis, y fixed) or c_{mu-1} - 1 (y-axis,
/// x fixed). The fixed coordinate is taken from p; the other is ignored.
double find_inflection(const MarcumPoint& p, Axis axis, double tol = kDefaultInflectionTolerance);

}  // namespace marcum
