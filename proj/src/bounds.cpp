#include "marcum/bounds.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "marcum/bessel.hpp"
#include "marcum/central_gamma.hpp"
#include "marcum/errors.hpp"
#include "marcum/summation.hpp"

namespace marcum {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct BoundMeta {
  BoundId id;
  std::string_view name;
};

constexpr std::array<BoundMeta, 16> kBoundNames{{
    {BoundId::MES1, "MES1"},
    {BoundId::MES2, "MES2"},
    {BoundId::MES3, "MES3"},
    {BoundId::MAS1, "MAS1"},
    {BoundId::MAS2, "MAS2"},
    {BoundId::MAS3, "MAS3"},
    {BoundId::betterlo, "betterlo"},
    {BoundId::ratio_p_upper, "ratio_p_upper"},
    {BoundId::ratio_p_lower, "ratio_p_lower"},
    {BoundId::ratio_p_cf_upper, "ratio_p_cf_upper"},
    {BoundId::ratio_q_lower, "ratio_q_lower"},
    {BoundId::ratio_q_upper, "ratio_q_upper"},
    {BoundId::sequence, "sequence"},
    {BoundId::superior, "superior"},
    {BoundId::qratio_lower, "qratio_lower"},
    {BoundId::qratio_upper, "qratio_upper"},
}};

void require_positive_order(const MarcumPoint& p, const char* what) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw DomainError(std::string(what) + ": arguments must be finite");
  }
  if (!(p.mu > 0.0)) throw DomainError(std::string(what) + " requires mu > 0");
  if (p.x < 0.0 || !(p.y > 0.0)) throw DomainError(std::string(what) + " requires x >= 0 and y > 0");
}

BoundEvaluation make(BoundId id, Side side, BoundTarget target, std::string condition) {
  BoundEvaluation out;
  out.id = id;
  out.side = side;
  out.target = target;
  out.value = kNaN;
  out.condition = std::move(condition);
  return out;
}

/// Relative products s_k = F_{mu+k} / F_mu, k = 0..count-1.
std::vector<LogScaled> relative_products(const MarcumPoint& p, std::size_t count) {
  std::vector<LogScaled> out;
  out.reserve(count);
  if (count == 0) return out;
  out.push_back(LogScaled::one());
  if (count == 1) return out;
  const std::vector<double> c = c_sequence(p, 1, count - 1);
  for (std::size_t k = 1; k < count; ++k) out.push_back(out.back() * c[k - 1]);
  return out;
}

double safe_c(const MarcumPoint& p, int shift) {
  try {
    return c_coefficient(p, shift);
  } catch (const DomainError&) {
    return kNaN;
  }
}

double safe_f(double mu, double x, double y) {
  if (mu < -1.0) return kNaN;
  return f_kernel({mu, x, y}).to_double();
}

}  // namespace

std::string_view to_string(BoundId id) {
  for (const BoundMeta& m : kBoundNames) {
    if (m.id == id) return m.name;
  }
  return "unknown";
}

std::string_view to_string(BoundTarget target) {
  switch (target) {
    case BoundTarget::Q: return "Q";
    case BoundTarget::P: return "P";
    case BoundTarget::ratioP: return "ratioP";
    case BoundTarget::ratioQ: return "ratioQ";
  }
  return "unknown";
}

std::optional<BoundId> parse_bound_id(std::string_view text) {
  for (const BoundMeta& m : kBoundNames) {
    if (m.name == text) return m.id;
  }
  return std::nullopt;
}

std::vector<double> c_sequence(const MarcumPoint& p, int shift, std::size_t count) {
  const double first = p.mu + shift;
  if (first < 0.0) throw DomainError("c_sequence requires mu + shift >= 0");
  std::vector<double> out(count);
  const double t = 2.0 * std::sqrt(p.x) * std::sqrt(p.y);
  if (p.x < kCentralThreshold || t == 0.0) {
    for (std::size_t j = 0; j < count; ++j) {
      const double nu = first + static_cast<double>(j);
      if (nu == 0.0) throw DomainError("c_0(0, y) is undefined");
      out[j] = p.y / nu;
    }
    return out;
  }
  const double scale = std::sqrt(p.y) / std::sqrt(p.x);
  const std::vector<double> g = bessel_ratio_sequence(first, t, count);
  for (std::size_t j = 0; j < count; ++j) out[j] = scale * g[j];
  return out;
}

BoundPair ratio_p_simple(const MarcumPoint& p) {
  require_positive_order(p, "ratio_p_simple");
  const double c = c_coefficient(p, 1);
  BoundPair out;
  out.lower = make(BoundId::ratio_p_lower, Side::lower, BoundTarget::ratioP, "mu > 0");
  out.lower.value = c / (1.0 + c);
  out.lower.valid = true;
  out.upper = make(BoundId::ratio_p_upper, Side::upper, BoundTarget::ratioP, "mu > 0");
  out.upper.value = std::min(1.0, c);
  out.upper.valid = true;
  return out;
}

RatioBoundsN ratio_p_convergent(const MarcumPoint& p, std::size_t n) {
  require_positive_order(p, "ratio_p_convergent");
  const std::vector<LogScaled> s = relative_products(p, n + 2);
  LogScaled numerator;  // sum_{k=1}^{n+1} s_k
  for (std::size_t k = 1; k <= n + 1; ++k) numerator += s[k];
  const LogScaled lower_den = numerator + LogScaled::one();
  // sum_{k=0}^{n} s_k = 1 + sum_{k=1}^{n} s_k
  LogScaled partial = LogScaled::one();
  for (std::size_t k = 1; k <= n; ++k) partial += s[k];
  RatioBoundsN out;
  out.n = n;
  out.lower = (numerator / lower_den).to_double();
  out.upper = (numerator / partial).to_double();
  return out;
}

double ratio_p_cf_upper(const MarcumPoint& p, std::size_t k) {
  require_positive_order(p, "ratio_p_cf_upper");
  // c_{mu+1}, ..., c_{mu+k+2}
  const std::vector<double> c = c_sequence(p, 1, k + 2);
  double value = c[k + 1];
  for (std::size_t j = k + 1; j-- > 0;) {
    const double denominator = 1.0 + c[j] - value;
    if (!(denominator > 0.0)) {
      throw InvalidRegionError("continued-fraction denominator 1 + c - tail is not positive");
    }
    value = c[j] / denominator;
  }
  return value;
}

BoundPair ratio_q_bounds(const MarcumPoint& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || !(p.y > 0.0)) {
    throw DomainError("ratio_q_bounds requires finite mu, x >= 0, y > 0");
  }
  if (p.mu < 0.0) throw DomainError("ratio_q_bounds requires mu >= 0");
  const double c = safe_c(p, 0);
  BoundPair out;
  out.lower = make(BoundId::ratio_q_lower, Side::lower, BoundTarget::ratioQ, "mu >= 0");
  out.upper = make(BoundId::ratio_q_upper, Side::upper, BoundTarget::ratioQ, "mu >= 1, or mu >= 0 with xy >= 1");
  if (std::isfinite(c)) {
    out.lower.value = std::max(1.0, c);
    out.lower.valid = true;
    out.upper.value = 1.0 + c;
    out.upper.valid = p.mu >= 1.0 || p.x * p.y >= 1.0;
  }
  return out;
}

BoundEvaluation q_bound(BoundId id, const MarcumPoint& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || !(p.y > 0.0)) {
    throw DomainError("q_bound requires finite mu, x >= 0, y > 0");
  }
  const double mu = p.mu;
  const double x = p.x;
  const double y = p.y;
  const bool xy_ge_1 = x * y >= 1.0;
  switch (id) {
    case BoundId::MES1: {
      auto out = make(id, Side::lower, BoundTarget::Q, "mu > 0 and y < x + mu + 1/2");
      if (!(mu > 0.0)) return out;
      const double c = c_coefficient(p, 1);
      const LogScaled f = f_kernel(p);
      if (c < 1.0) {
        const double complement = (f / LogScaled::from_double(1.0 - c)).to_double();
        out.complement_value = complement;
        out.value = 1.0 - complement;
      }
      out.valid = y < x + mu + 0.5 && c < 1.0;
      return out;
    }
    case BoundId::MES2: {
      auto out = make(id, Side::upper, BoundTarget::Q, "mu >= 0 and y > x + mu");
      if (!(mu >= 0.0)) return out;
      const double c = safe_c(p, 0);
      if (!(c > 1.0)) return out;
      out.value = (f_kernel(p) / LogScaled::from_double(c - 1.0)).to_double();
      out.valid = y > x + mu;
      return out;
    }
    case BoundId::MES3: {
      auto out = make(id, Side::upper, BoundTarget::Q, "mu >= 1 and y > x + mu - 1");
      if (!(mu >= 1.0)) return out;
      const double c = safe_c(p, -1);
      if (!(c > 1.0)) return out;
      out.value = (f_kernel({mu - 1.0, x, y}) / LogScaled::from_double(1.0 - 1.0 / c)).to_double();
      out.valid = y > x + mu - 1.0;
      return out;
    }
    case BoundId::MAS1: {
      auto out = make(id, Side::upper, BoundTarget::Q, "mu > 0");
      if (!(mu > 0.0)) return out;
      const double c = c_coefficient(p, 1);
      const double complement = (f_kernel(p) * (1.0 + c)).to_double();
      out.complement_value = complement;
      out.value = 1.0 - complement;
      out.valid = true;
      return out;
    }
    case BoundId::MAS2: {
      // The kernel F_{mu-1} exists for mu - 1 >= -1, which limits the xy >= 1
      // extension to mu >= 0.
      auto out = make(id, Side::lower, BoundTarget::Q, "mu >= 1, or mu >= 0 with xy >= 1");
      if (!(mu >= 0.0)) return out;
      out.value = safe_f(mu - 1.0, x, y);
      out.valid = mu >= 1.0 || xy_ge_1;
      return out;
    }
    case BoundId::MAS3: {
      // c_{mu-1} needs mu - 1 >= 0, which limits the xy >= 1 extension to mu >= 1.
      auto out = make(id, Side::lower, BoundTarget::Q, "mu >= 2, or mu >= 1 with xy >= 1");
      if (!(mu >= 1.0)) return out;
      const double c = safe_c(p, -1);
      if (!std::isfinite(c) || !(c > 0.0)) return out;
      out.value = (f_kernel({mu - 1.0, x, y}) * (1.0 + 1.0 / c)).to_double();
      out.valid = mu >= 2.0 || xy_ge_1;
      return out;
    }
    default:
      throw DomainError("q_bound accepts only MES1, MES2, MES3, MAS1, MAS2, MAS3");
  }
}

BoundEvaluation p_bound_better(const MarcumPoint& p) {
  require_positive_order(p, "p_bound_better");
  auto out = make(BoundId::betterlo, Side::upper, BoundTarget::P, "y < x + mu + 3/2");
  const std::vector<double> c = c_sequence(p, 1, 2);
  if (!(c[1] < 1.0)) return out;
  out.value = (f_kernel(p) * (1.0 + c[0] / (1.0 - c[1]))).to_double();
  out.valid = p.y < p.x + p.mu + 1.5;
  return out;
}

std::string_view to_string(PInner inner) {
  switch (inner) {
    case PInner::zero: return "zero";
    case PInner::mas1_complement: return "mas1_complement";
    case PInner::pp2: return "pp2";
    case PInner::betterlo: return "betterlo";
    case PInner::exact: return "exact";
  }
  return "unknown";
}

std::optional<PInner> parse_p_inner(std::string_view text) {
  for (PInner v : {PInner::zero, PInner::mas1_complement, PInner::pp2, PInner::betterlo, PInner::exact}) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

BoundEvaluation p_inner_bound(PInner inner, const MarcumPoint& at) {
  require_positive_order(at, "p_inner_bound");
  switch (inner) {
    case PInner::zero: {
      auto out = make(BoundId::sequence, Side::lower, BoundTarget::P, "always");
      out.value = 0.0;
      out.valid = true;
      return out;
    }
    case PInner::mas1_complement: {
      const BoundEvaluation mas1 = q_bound(BoundId::MAS1, at);
      auto out = make(BoundId::sequence, Side::lower, BoundTarget::P, "mu > 0");
      out.value = mas1.complement_value.value_or(kNaN);
      out.valid = mas1.valid;
      return out;
    }
    case PInner::pp2: {
      const BoundEvaluation mes1 = q_bound(BoundId::MES1, at);
      auto out = make(BoundId::sequence, Side::upper, BoundTarget::P, "y < x + mu + 1/2");
      out.value = mes1.complement_value.value_or(kNaN);
      out.valid = mes1.valid;
      return out;
    }
    case PInner::betterlo: {
      BoundEvaluation out = p_bound_better(at);
      out.id = BoundId::sequence;
      return out;
    }
    case PInner::exact: {
      auto out = make(BoundId::sequence, Side::lower, BoundTarget::P, "exact value");
      out.value = marcum_p(at).value;
      out.valid = true;
      return out;
    }
  }
  throw DomainError("unknown inner bound");
}

BoundEvaluation p_bound_sequence(const MarcumPoint& p, std::size_t n, PInner inner) {
  require_positive_order(p, "p_bound_sequence");
  const MarcumPoint shifted{p.mu + static_cast<double>(n) + 1.0, p.x, p.y};
  BoundEvaluation out = p_inner_bound(inner, shifted);
  out.id = BoundId::sequence;
  out.condition = "inner bound at order mu + n + 1: " + out.condition;
  if (!std::isfinite(out.value)) {
    out.valid = false;
    return out;
  }
  const LogScaled first = f_kernel(p);
  const std::vector<LogScaled> s = relative_products(p, n + 1);
  LogScaled partial;
  for (const LogScaled& v : s) partial += v;
  out.value = (first * partial).to_double() + out.value;
  return out;
}

BoundEvaluation p_upper_superior(const MarcumPoint& p, std::size_t n) {
  require_positive_order(p, "p_upper_superior");
  auto out = make(BoundId::superior, Side::upper, BoundTarget::P, "F_mu > F_{mu+n+1}");
  const std::vector<LogScaled> s = relative_products(p, n + 2);
  const double last = s[n + 1].to_double();  // F_{mu+n+1} / F_mu
  LogScaled partial;
  for (std::size_t k = 0; k <= n; ++k) partial += s[k];
  if (!(last < 1.0)) return out;
  out.value = (f_kernel(p) * partial / LogScaled::from_double(1.0 - last)).to_double();
  out.valid = true;
  return out;
}

BoundPair p_bounds_gamma_series(const MarcumPoint& p, std::size_t n) {
  require_positive_order(p, "p_bounds_gamma_series");
  CompensatedSum<double> lower;
  LogScaled weight = LogScaled::exp(-p.x);
  for (std::size_t k = 0; k <= n; ++k) {
    const LogScaled pk = incgamma_scaled(p.mu + static_cast<double>(k), p.y).p;
    lower += (weight * pk).to_double();
    weight *= p.x / static_cast<double>(k + 1);
  }
  // 1 - e^{-x} sum_{k<=n} x^k/k! Q_{mu+k}(y)
  //   = e^{-x} sum_{k<=n} x^k/k! P_{mu+k}(y) + Pr[Poisson(x) > n],
  // and the Poisson tail is the regularized P(n+1, x).
  const double poisson_tail = p.x > 0.0 ? incgamma_regularized(static_cast<double>(n) + 1.0, p.x).p : 0.0;
  BoundPair out;
  out.lower = make(BoundId::qratio_lower, Side::lower, BoundTarget::P, "mu > 0");
  out.lower.value = lower.value();
  out.lower.valid = true;
  out.upper = make(BoundId::qratio_upper, Side::upper, BoundTarget::P, "mu > 0");
  out.upper.value = lower.value() + poisson_tail;
  out.upper.valid = true;
  return out;
}

double turan_noncentral_check(const MarcumPoint& p, TuranTarget target) {
  require_positive_order(p, "turan_noncentral_check");
  const MarcumPoint next{p.mu + 1.0, p.x, p.y};
  const double f0 = f_kernel(p).to_double();
  const double f1 = f_kernel(next).to_double();
  if (target == TuranTarget::P) {
    const double p1 = marcum_p(next).value;
    return f0 * f1 - p1 * (f0 - f1);
  }
  const double q1 = marcum_q(next).value;
  return q1 * (f0 - f1) + f0 * f1;
}

}  // namespace marcum
