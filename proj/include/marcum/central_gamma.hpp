#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "marcum/bound_types.hpp"
#include "marcum/log_scaled.hpp"

namespace marcum {

/// Shape parameter a and argument y of the incomplete gamma functions.
struct GammaPoint {
  double a = 0.0;
  double y = 0.0;
};

/// Regularized incomplete gamma ratios P(a,y) = gamma(a,y)/Gamma(a) and
/// Q(a,y) = Gamma(a,y)/Gamma(a).
struct IncGamma {
  double p = 0.0;
  double q = 0.0;
};

/// The same ratios kept in scaled form so that tiny tails do not underflow.
struct IncGammaScaled {
  LogScaled p;
  LogScaled q;
};

/// P and Q for a > 0, y > 0: ascending series for y < a + 1, Legendre
/// continued fraction otherwise; the other one follows by complement.
IncGamma incgamma_regularized(double a, double y);
IncGammaScaled incgamma_scaled(double a, double y);

/// Unnormalized gamma(a, y) for a > 0.
LogScaled lower_gamma(double a, double y);
/// Unnormalized Gamma(a, y) for every real a and y > 0.
LogScaled upper_gamma(double a, double y);
/// Gamma(a, y) / Gamma(a) for every real a; the recurrence
/// Q(a, y) = Q(a+1, y) - y^a e^{-y} / Gamma(a+1) extends it to a <= 0, where
/// it may be negative. Zero at nonpositive integers a.
double regularized_q_extended(double a, double y);

/// h_a(y) = gamma(a,y) / gamma(a-1,y), a > 1.
double gamma_ratio_h(double a, double y);
/// H_a(y) = Gamma(a,y) / Gamma(a-1,y), every real a.
double gamma_ratio_H(double a, double y);

enum class CentralBoundId {
  l1, l2, l3, u1, u2, u3, L1, L2, L3, U1, l_comb, L_comb, UQ, lH, LH,
  b1_merkle, h_upper, h_lower_Lh, H_upper, p_ratio
};

enum class CentralTarget { gamma_lower_inc, gamma_upper_inc, ratio_h, ratio_H };

std::string_view to_string(CentralBoundId id);
std::string_view to_string(CentralTarget target);
std::optional<CentralBoundId> parse_central_bound_id(std::string_view text);

struct CentralBoundEvaluation {
  CentralBoundId id = CentralBoundId::l1;
  Side side = Side::lower;
  CentralTarget target = CentralTarget::gamma_lower_inc;
  double value = 0.0;
  bool valid = false;
  std::string condition;
};

/// Default number of series terms in l1.
inline constexpr int kDefaultL1Terms = 2;

/// Evaluates one bound of the catalogue. Bounds outside their region are
/// returned with valid = false (value is the formula value when finite,
/// otherwise NaN); no exception is thrown.
CentralBoundEvaluation central_bound(CentralBoundId id, GammaPoint g, int l1_terms = kDefaultL1Terms);

/// The exact quantity a bound with the given target approximates.
double central_target_value(CentralTarget target, GammaPoint g);

enum class GammaFamily { lower_incomplete, upper_incomplete };

struct TuranCheck {
  double ratio = 0.0;
  double lower_ref = 0.0;  ///< -inf when no lower reference applies
  double upper_ref = 0.0;
};

/// f(a)^2 / (f(a+1) f(a-1)) with f = gamma(.,y) or Gamma(.,y) and the
/// reference bounds it must lie strictly between.
TuranCheck turan_gamma_check(GammaPoint g, GammaFamily which);

/// True iff u1 is sharper than the Qi-Mei bound U_Q at (a, y).
bool uq_crossing(double a, double y);

enum class MonotoneFamily { p_a, h_a, H_a, h_over_am1, H_over_am1 };

std::optional<MonotoneFamily> parse_monotone_family(std::string_view text);

struct MonotonicityProbe {
  double first = 0.0;   ///< family value at a1
  double second = 0.0;  ///< family value at a2
  bool expect_increasing = true;
  /// Whether the pair is ordered as documented.
  bool holds() const { return expect_increasing ? first < second : first > second; }
};

MonotonicityProbe monotonicity_probe(MonotoneFamily family, double a1, double a2, double y);

}  // namespace marcum
