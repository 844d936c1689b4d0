#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marcum/bound_types.hpp"
#include "marcum/marcum.hpp"

namespace marcum {

enum class BoundId {
  MES1, MES2, MES3, MAS1, MAS2, MAS3,
  betterlo,
  ratio_p_upper, ratio_p_lower, ratio_p_cf_upper,
  ratio_q_lower, ratio_q_upper,
  sequence, superior, qratio_lower, qratio_upper
};

enum class BoundTarget { Q, P, ratioP, ratioQ };

std::string_view to_string(BoundId id);
std::string_view to_string(BoundTarget target);
std::optional<BoundId> parse_bound_id(std::string_view text);

/// One bound evaluated at one point. valid = false means the point lies
/// outside the region where the inequality is proven (ties at a region
/// boundary included) and the value carries no guarantee.
struct BoundEvaluation {
  BoundId id = BoundId::MES1;
  Side side = Side::lower;
  BoundTarget target = BoundTarget::Q;
  double value = 0.0;
  bool valid = false;
  std::string condition;
  /// For Q bounds built as 1 - (something): that something, an accurately
  /// computed bound on P of the opposite side.
  std::optional<double> complement_value;
};

struct BoundPair {
  BoundEvaluation lower;
  BoundEvaluation upper;
};

/// l^{(n)} < P_{mu+1}/P_mu < u^{(n)}.
struct RatioBoundsN {
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
};

/// c_{mu+1}/(1+c_{mu+1}) < P_{mu+1}/P_mu < min{1, c_{mu+1}}, mu > 0.
BoundPair ratio_p_simple(const MarcumPoint& p);

/// Partial-sum ratio bounds converging to P_{mu+1}/P_mu.
RatioBoundsN ratio_p_convergent(const MarcumPoint& p, std::size_t n);

/// Continued fraction for P_{mu+1}/P_mu with its tail replaced by
/// c_{mu+k+2}; an upper bound. Throws InvalidRegionError when a partial
/// denominator is not positive.
double ratio_p_cf_upper(const MarcumPoint& p, std::size_t k);

/// max{1, c_mu} < Q_{mu+1}/Q_mu < 1 + c_mu.
BoundPair ratio_q_bounds(const MarcumPoint& p);

/// The six summary bounds on Q_mu(x,y).
BoundEvaluation q_bound(BoundId id, const MarcumPoint& p);

/// P_mu < (1 + c_{mu+1}/(1 - c_{mu+2})) F_mu, valid for y < x + mu + 3/2.
BoundEvaluation p_bound_better(const MarcumPoint& p);

/// Bounds on P at order mu + n + 1 usable inside p_bound_sequence.
enum class PInner {
  zero,             ///< 0, lower
  mas1_complement,  ///< (1 + c_{m+1}) F_m, lower
  pp2,              ///< F_m / (1 - c_{m+1}), upper, y < x + m + 1/2
  betterlo,         ///< (1 + c_{m+1}/(1 - c_{m+2})) F_m, upper, y < x + m + 3/2
  exact             ///< P_m itself (reported as a lower bound)
};

std::string_view to_string(PInner inner);
std::optional<PInner> parse_p_inner(std::string_view text);

/// Bound at the given order (mu replaced by m) for use as an inner bound.
BoundEvaluation p_inner_bound(PInner inner, const MarcumPoint& at_order);

/// B^{(n)} = B_{mu+n+1} + sum_{k=0}^{n} F_{mu+k}; same side as the inner bound.
BoundEvaluation p_bound_sequence(const MarcumPoint& p, std::size_t n, PInner inner);

/// U^{(n)} = (sum_{k=0}^{n} F_{mu+k}) F_mu / (F_mu - F_{mu+n+1}), upper on P.
BoundEvaluation p_upper_superior(const MarcumPoint& p, std::size_t n);

/// Truncated incomplete gamma series: lower and upper bounds on P_mu(x,y).
BoundPair p_bounds_gamma_series(const MarcumPoint& p, std::size_t n);

enum class TuranTarget { P, Q };

/// f_{mu+1}^2 - f_mu f_{mu+2} for f = P or Q, evaluated in the forms
/// F_mu F_{mu+1} - P_{mu+1}(F_mu - F_{mu+1}) and
/// Q_{mu+1}(F_mu - F_{mu+1}) + F_mu F_{mu+1}; positive.
double turan_noncentral_check(const MarcumPoint& p, TuranTarget target);

/// c_{mu+shift}, ..., c_{mu+shift+count-1} at (x, y).
std::vector<double> c_sequence(const MarcumPoint& p, int shift, std::size_t count);

}  // namespace marcum
