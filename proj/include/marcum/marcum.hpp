#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "marcum/log_scaled.hpp"

namespace marcum {

/// Order mu, non-centrality x >= 0 and threshold y > 0.
struct MarcumPoint {
  double mu = 0.0;
  double x = 0.0;
  double y = 0.0;
};

enum class Method { series_f, series_poisson, complement, quadrature_oracle, central };

std::string_view to_string(Method method);

/// A function value with a bound on its truncation error.
struct EvalReport {
  double value = 0.0;
  double abs_error_est = 0.0;
  std::size_t terms_used = 0;
  Method method = Method::series_poisson;
};

struct SeriesConfig {
  double eps = 1e-14;
  std::size_t max_terms = 1'000'000;
};

/// Non-centrality below this is treated as exactly zero.
inline constexpr double kCentralThreshold = 1e-290;

/// F_mu(x,y) = (y/x)^{mu/2} e^{-x-y} I_mu(2 sqrt(xy)), mu >= -1; at x = 0
/// the limit y^mu e^{-y} / Gamma(mu+1).
LogScaled f_kernel(const MarcumPoint& p);

/// c_{mu+shift}(x,y) = sqrt(y/x) I_{mu+shift}(t) / I_{mu+shift-1}(t),
/// t = 2 sqrt(xy); y/(mu+shift) at x = 0.
double c_coefficient(const MarcumPoint& p, int shift = 0);

/// P_mu(x,y) = sum_k F_{mu+k}(x,y), mu > 0.
EvalReport marcum_p(const MarcumPoint& p, const SeriesConfig& config = {});

/// Q_mu(x,y) for mu > -2 (negative orders through the Poisson mixture).
EvalReport marcum_q(const MarcumPoint& p, const SeriesConfig& config = {});

/// Q_mu(x,y) = e^{-x} sum_k x^k/k! Q_{mu+k}(y), always by the mixture.
EvalReport q_by_poisson_mixture(const MarcumPoint& p, const SeriesConfig& config = {});

/// Both tails from adaptive quadrature of the defining integral; the smaller
/// tail is integrated, the other is its complement.
struct OraclePair {
  double q = 0.0;
  double p = 0.0;
  double abs_error_est = 0.0;
  bool integrated_q = true;  ///< which tail was integrated
  std::size_t evaluations = 0;
};

/// Quadrature of the defining integral with relative accuracy rel_tol on the
/// integrated tail. Throws ToleranceError when the accuracy is not reached.
OraclePair q_by_quadrature(const MarcumPoint& p, double rel_tol = 1e-14);

/// Independent reference: quadrature cross-checked against the Poisson
/// mixture. Throws ToleranceError when the estimate exceeds target_abs_err or
/// the two evaluations disagree by more than max(target_abs_err, 1e-13 Q).
EvalReport oracle_q(const MarcumPoint& p, double target_abs_err = 1e-14);

/// Like oracle_q but returning both tails accurately.
OraclePair oracle_pq(const MarcumPoint& p, double target_abs_err = 1e-14);

/// dQ/dy = -F_{mu-1}(x,y), mu > 1.
double dq_dy(const MarcumPoint& p);
/// dQ/dx = F_mu(x,y), mu > 0.
double dq_dx(const MarcumPoint& p);

/// L_{mu0}(y) = (sqrt((y-mu0-2)^2 + 4y) - y - mu0) / (2y); x >= L_{mu0}(y)
/// guarantees Q_mu(x,y) > 0 for all mu >= mu0, mu0 in (-1, 0).
double q_positivity_threshold(double mu0, double y);

/// True when one of the known sufficient conditions for Q_mu(x,y) > 0 holds.
/// False means "no guarantee", not "negative".
bool is_q_positive_guaranteed(const MarcumPoint& p);

}  // namespace marcum
