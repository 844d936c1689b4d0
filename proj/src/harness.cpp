#include "marcum/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "marcum/central_gamma.hpp"
#include "marcum/convexity.hpp"
#include "marcum/errors.hpp"
#include "marcum/random.hpp"

namespace marcum::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<TableBound, 5> kTableBounds{TableBound::US1A, TableBound::US1B, TableBound::US2,
                                                 TableBound::LS1, TableBound::LS2};

// ---------------------------------------------------------------------------
// Sweep plumbing.

/// Results gathered for one sample point.
struct PointResult {
  std::size_t checks = 0;
  std::vector<Violation> violations;
  /// (check, coordinates, margin) of documented exceptions.
  struct Exception {
    std::string check;
    std::vector<std::pair<std::string, double>> point;
    double margin = 0.0;
  };
  std::vector<Exception> exceptions;
  std::vector<std::string> notes;

  using Point = std::vector<std::pair<std::string, double>>;

  /// Records a check that passes iff margin <= 0 (NaN margins fail).
  void require(const Point& point, std::string check, double margin) {
    ++checks;
    if (!(margin <= 0.0)) violations.push_back({point, std::move(check), margin});
  }

  /// lhs <= rhs up to relative slack (relative to |rhs|, or absolute when
  /// rhs is zero).
  void require_le(const Point& point, std::string check, double lhs, double rhs, double slack) {
    const double scale = rhs != 0.0 ? std::abs(rhs) : 1.0;
    require(point, std::move(check), (lhs - rhs) / scale - slack);
  }

  void require_ge(const Point& point, std::string check, double lhs, double rhs, double slack) {
    const double scale = rhs != 0.0 ? std::abs(rhs) : 1.0;
    require(point, std::move(check), (rhs - lhs) / scale - slack);
  }
};

unsigned thread_count(const VerifyOptions& options) {
  if (options.threads != 0) return static_cast<unsigned>(options.threads);
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates work(i) for i in [0, n) on a thread pool; results are stored by
/// index so the aggregate does not depend on scheduling.
std::vector<PointResult> parallel_map(std::size_t n, unsigned threads,
                                      const std::function<PointResult(std::size_t)>& work) {
  std::vector<PointResult> results(n);
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) {
        try {
          results[i] = work(i);
        } catch (const std::exception& e) {
          PointResult failed;
          failed.checks = 1;
          failed.violations.push_back({{{"index", static_cast<double>(i)}}, std::string("exception: ") + e.what(), kInf});
          results[i] = std::move(failed);
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  return results;
}

VerifyReport collect(Suite suite, std::size_t points, std::uint64_t seed, std::vector<PointResult>&& results) {
  VerifyReport report;
  report.suite = std::string(to_string(suite));
  report.seed = seed;
  report.points = points;
  std::vector<PointResult::Exception> exceptions;
  for (PointResult& r : results) {
    report.checks += r.checks;
    for (Violation& v : r.violations) report.violations.push_back(std::move(v));
    for (auto& e : r.exceptions) exceptions.push_back(std::move(e));
    for (std::string& note : r.notes) {
      if (std::find(report.notes.begin(), report.notes.end(), note) == report.notes.end()) {
        report.notes.push_back(std::move(note));
      }
    }
  }
  // Summarise exceptions per check.
  std::vector<std::string> checks;
  for (const auto& e : exceptions) {
    if (std::find(checks.begin(), checks.end(), e.check) == checks.end()) checks.push_back(e.check);
  }
  std::sort(checks.begin(), checks.end());
  for (const std::string& check : checks) {
    ExceptionRegion region;
    region.check = check;
    for (const auto& e : exceptions) {
      if (e.check != check) continue;
      ++region.count;
      region.worst_margin = std::max(region.worst_margin, e.margin);
      for (const auto& [name, value] : e.point) {
        auto it = std::find_if(region.ranges.begin(), region.ranges.end(),
                               [&](const auto& r) { return r.first == name; });
        if (it == region.ranges.end()) {
          region.ranges.push_back({name, {value, value}});
        } else {
          it->second.first = std::min(it->second.first, value);
          it->second.second = std::max(it->second.second, value);
        }
      }
    }
    report.exception_regions.push_back(std::move(region));
  }
  sort_canonically(report);
  return report;
}

/// Noncentral sample: mu in [0.5, 50], x in [0, 100], y in (0, 100].
struct NoncentralDraw {
  double mu, x, y;
};

std::vector<NoncentralDraw> draw_noncentral(std::size_t n, std::uint64_t seed) {
  UniformStream rng(seed);
  std::vector<NoncentralDraw> out(n);
  for (auto& d : out) {
    d.mu = rng.uniform(0.5, 50.0);
    d.x = rng.uniform(0.0, 100.0);
    d.y = rng.uniform_open_low(0.0, 100.0);
  }
  return out;
}

PointResult::Point coords(const MarcumPoint& p) { return {{"mu", p.mu}, {"x", p.x}, {"y", p.y}}; }
PointResult::Point coords(double a, double y) { return {{"a", a}, {"y", y}}; }

// ---------------------------------------------------------------------------
// Suites.

PointResult complementarity_point(const MarcumPoint& p, const VerifyOptions& o) {
  PointResult r;
  const double q = marcum_q(p, o.series).value;
  const double pv = marcum_p(p, o.series).value;
  r.require(coords(p), "|P + Q - 1| <= 1e-12", std::abs(pv + q - 1.0) - 1e-12);
  return r;
}

PointResult recurrence_point(const MarcumPoint& p, const VerifyOptions& o) {
  PointResult r;
  const auto pt = coords(p);
  const MarcumPoint up{p.mu + 1.0, p.x, p.y};
  const MarcumPoint down{p.mu - 1.0, p.x, p.y};
  const double q0 = marcum_q(p, o.series).value;
  const double q1 = marcum_q(up, o.series).value;
  const double p0 = marcum_p(p, o.series).value;
  const double p1 = marcum_p(up, o.series).value;
  const double f0 = f_kernel(p).to_double();
  r.require(pt, "Q_{mu+1} - Q_mu - F_mu", std::abs(q1 - q0 - f0) - 1e-12 * std::max(1.0, q0));
  r.require(pt, "P_{mu+1} - P_mu + F_mu", std::abs(p1 - p0 + f0) - 1e-12 * std::max(1.0, p0));
  if (down.mu > 0.0) {
    const double c = c_coefficient(p);
    const double qm = marcum_q(down, o.series).value;
    const double pm = marcum_p(down, o.series).value;
    const double scale_q = std::max({1.0, q1, (1.0 + c) * q0, c * qm});
    const double scale_p = std::max({1.0, p1, (1.0 + c) * p0, c * pm});
    r.require(pt, "three-term recurrence for Q", std::abs(q1 - (1.0 + c) * q0 + c * qm) - 1e-11 * scale_q);
    r.require(pt, "three-term recurrence for P", std::abs(p1 - (1.0 + c) * p0 + c * pm) - 1e-11 * scale_p);
  }
  return r;
}

PointResult bound_validity_point(const MarcumPoint& p) {
  constexpr double kSlack = 1e-11;
  PointResult r;
  const auto pt = coords(p);
  OraclePair o0;
  OraclePair o1;
  try {
    o0 = oracle_pq(p);
    o1 = oracle_pq({p.mu + 1.0, p.x, p.y});
  } catch (const std::exception& e) {
    r.require(pt, std::string("oracle: ") + e.what(), kInf);
    return r;
  }
  const bool q_smaller = o0.q <= o0.p;

  // Function bounds on Q; those built as 1 - C are checked on the smaller tail.
  for (BoundId id : {BoundId::MES1, BoundId::MES2, BoundId::MES3, BoundId::MAS1, BoundId::MAS2, BoundId::MAS3}) {
    const BoundEvaluation b = q_bound(id, p);
    if (!b.valid) continue;
    const std::string name(to_string(id));
    const bool lower = b.side == Side::lower;
    if (b.complement_value && !q_smaller) {
      // C bounds P from the opposite side.
      if (lower) {
        r.require_ge(pt, name + " (complement on P)", *b.complement_value, o0.p, kSlack);
      } else {
        r.require_le(pt, name + " (complement on P)", *b.complement_value, o0.p, kSlack);
      }
    } else if (lower) {
      r.require_le(pt, name, b.value, o0.q, kSlack);
    } else {
      r.require_ge(pt, name, b.value, o0.q, kSlack);
    }
  }
  // Ordering claims between summary bounds.
  {
    const BoundEvaluation mes2 = q_bound(BoundId::MES2, p);
    const BoundEvaluation mes3 = q_bound(BoundId::MES3, p);
    if (mes2.valid && mes3.valid) r.require_le(pt, "MES3 <= MES2", mes3.value, mes2.value, kSlack);
    const BoundEvaluation mas2 = q_bound(BoundId::MAS2, p);
    const BoundEvaluation mas3 = q_bound(BoundId::MAS3, p);
    if (mas2.valid && mas3.valid) r.require_ge(pt, "MAS3 >= MAS2", mas3.value, mas2.value, kSlack);
    const BoundEvaluation better = p_bound_better(p);
    if (better.valid) r.require_ge(pt, "betterlo", better.value, o0.p, kSlack);
    const BoundEvaluation mes1 = q_bound(BoundId::MES1, p);
    if (better.valid && mes1.valid && mes1.complement_value) {
      r.require_le(pt, "betterlo <= F/(1 - c)", better.value, *mes1.complement_value, kSlack);
    }
  }

  // Ratio bounds.
  const double ratio_p = o1.p / o0.p;
  const double ratio_q = o1.q / o0.q;
  {
    const BoundPair simple = ratio_p_simple(p);
    r.require_le(pt, "ratio_p_lower", simple.lower.value, ratio_p, kSlack);
    r.require_ge(pt, "ratio_p_upper", simple.upper.value, ratio_p, kSlack);
    for (std::size_t n : {0u, 1u, 5u, 20u}) {
      const RatioBoundsN b = ratio_p_convergent(p, n);
      const std::string suffix = " n=" + std::to_string(n);
      r.require_le(pt, "ratio_p_convergent lower" + suffix, b.lower, ratio_p, kSlack);
      r.require_ge(pt, "ratio_p_convergent upper" + suffix, b.upper, ratio_p, kSlack);
    }
    for (std::size_t k : {0u, 1u, 3u}) {
      try {
        const double u = ratio_p_cf_upper(p, k);
        r.require_ge(pt, "ratio_p_cf_upper k=" + std::to_string(k), u, ratio_p, kSlack);
      } catch (const InvalidRegionError&) {
      }
    }
    const BoundPair qb = ratio_q_bounds(p);
    if (qb.lower.valid) r.require_le(pt, "ratio_q_lower", qb.lower.value, ratio_q, kSlack);
    if (qb.upper.valid) r.require_ge(pt, "ratio_q_upper", qb.upper.value, ratio_q, kSlack);
  }

  // Convergent sequences on P.
  for (std::size_t n : {0u, 1u, 5u, 20u}) {
    const std::string suffix = " n=" + std::to_string(n);
    for (PInner inner : {PInner::zero, PInner::mas1_complement, PInner::pp2, PInner::betterlo}) {
      const BoundEvaluation b = p_bound_sequence(p, n, inner);
      if (!b.valid) continue;
      const std::string name = "sequence/" + std::string(to_string(inner)) + suffix;
      if (b.side == Side::lower) {
        r.require_le(pt, name, b.value, o0.p, kSlack);
      } else {
        r.require_ge(pt, name, b.value, o0.p, kSlack);
      }
    }
    const BoundEvaluation sup = p_upper_superior(p, n);
    if (sup.valid) r.require_ge(pt, "superior" + suffix, sup.value, o0.p, kSlack);
  }
  for (std::size_t n : {0u, 5u, 10u}) {
    const BoundPair b = p_bounds_gamma_series(p, n);
    const std::string suffix = " n=" + std::to_string(n);
    r.require_le(pt, "qratio_lower" + suffix, b.lower.value, o0.p, kSlack);
    r.require_ge(pt, "qratio_upper" + suffix, b.upper.value, o0.p, kSlack);
  }
  return r;
}

/// Ratio and function monotonicity on an ordered pair differing in one
/// coordinate.
PointResult ratio_monotonicity_point(const MarcumPoint& base, int coordinate, double step,
                                     const VerifyOptions& o) {
  constexpr double kSlack = 1e-10;
  PointResult r;
  MarcumPoint moved = base;
  const char* name = "mu";
  if (coordinate == 0) {
    moved.mu += step;
  } else if (coordinate == 1) {
    moved.x += step;
    name = "x";
  } else {
    moved.y += step;
    name = "y";
  }
  auto pt = coords(base);
  pt.push_back({"step", step});
  auto ratios = [&](const MarcumPoint& p) {
    const MarcumPoint up{p.mu + 1.0, p.x, p.y};
    const double q0 = marcum_q(p, o.series).value;
    const double p0 = marcum_p(p, o.series).value;
    const double q1 = marcum_q(up, o.series).value;
    const double p1 = marcum_p(up, o.series).value;
    const double c = c_coefficient(p, 1);
    return std::array<double, 5>{p1 / p0, q1 / q0, q0, p0, (c - p1 / p0) / c};
  };
  const auto a = ratios(base);
  const auto b = ratios(moved);
  const std::string suffix = std::string(" vs ") + name;
  const bool increasing_in = coordinate == 2;  // ratios increase in y only
  if (increasing_in) {
    r.require_le(pt, "P_{mu+1}/P_mu increasing" + suffix, a[0], b[0], kSlack);
    r.require_le(pt, "Q_{mu+1}/Q_mu increasing" + suffix, a[1], b[1], kSlack);
    r.require_ge(pt, "Q decreasing" + suffix, a[2], b[2], kSlack);
    r.require_le(pt, "P increasing" + suffix, a[3], b[3], kSlack);
    // The simple upper bound c_{mu+1} becomes sharper as y decreases.
    r.require_le(pt, "relative gap of c_{mu+1} increasing" + suffix, a[4], b[4], kSlack);
  } else {
    r.require_ge(pt, "P_{mu+1}/P_mu decreasing" + suffix, a[0], b[0], kSlack);
    r.require_ge(pt, "Q_{mu+1}/Q_mu decreasing" + suffix, a[1], b[1], kSlack);
    r.require_le(pt, "Q increasing" + suffix, a[2], b[2], kSlack);
    r.require_ge(pt, "P decreasing" + suffix, a[3], b[3], kSlack);
    r.require_ge(pt, "relative gap of c_{mu+1} decreasing" + suffix, a[4], b[4], kSlack);
  }
  return r;
}

PointResult turan_noncentral_point(const MarcumPoint& p, const VerifyOptions& o) {
  PointResult r;
  const auto pt = coords(p);
  const MarcumPoint next{p.mu + 1.0, p.x, p.y};
  const double f0 = f_kernel(p).to_double();
  const double f1 = f_kernel(next).to_double();
  const double p1 = marcum_p(next, o.series).value;
  const double q1 = marcum_q(next, o.series).value;
  // The determinants are differences of products; the rounding scale is the
  // size of those products.
  const double det_p = turan_noncentral_check(p, TuranTarget::P);
  const double det_q = turan_noncentral_check(p, TuranTarget::Q);
  const double scale_p = f0 * f1 + p1 * std::abs(f0 - f1);
  const double scale_q = f0 * f1 + q1 * std::abs(f0 - f1);
  r.require(pt, "P Turan determinant > 0", -det_p - 1e-12 * scale_p);
  r.require(pt, "Q Turan determinant > 0", -det_q - 1e-12 * scale_q);
  return r;
}

PointResult turan_central_point(double a, double y) {
  constexpr double kSlack = 1e-12;
  PointResult r;
  const auto pt = coords(a, y);
  if (a > 1.0) {
    const TuranCheck lower = turan_gamma_check({a, y}, GammaFamily::lower_incomplete);
    r.require_ge(pt, "gamma Turan ratio > lower reference", lower.ratio, lower.lower_ref, kSlack);
    r.require_le(pt, "gamma Turan ratio < upper reference", lower.ratio, lower.upper_ref, kSlack);
  }
  const TuranCheck upper = turan_gamma_check({a, y}, GammaFamily::upper_incomplete);
  if (std::isfinite(upper.lower_ref)) {
    r.require_ge(pt, "Gamma Turan ratio > lower reference", upper.ratio, upper.lower_ref, kSlack);
  }
  r.require_le(pt, "Gamma Turan ratio < 1", upper.ratio, upper.upper_ref, kSlack);
  return r;
}

/// Second central difference of Q along one axis.
double second_difference(const MarcumPoint& p, Axis axis, double h, const VerifyOptions& o) {
  auto q_at = [&](double shift) {
    MarcumPoint s = p;
    (axis == Axis::x ? s.x : s.y) += shift;
    return marcum_q(s, o.series).value;
  };
  return (q_at(h) - 2.0 * q_at(0.0) + q_at(-h)) / (h * h);
}

PointResult convexity_point(std::size_t index, UniformStream& rng, const VerifyOptions& o) {
  PointResult r;
  const Axis axis = index % 2 == 0 ? Axis::x : Axis::y;
  MarcumPoint p;
  if (axis == Axis::x) {
    p.mu = rng.uniform(0.0, 20.0);
    p.y = p.mu + 1.0 + rng.uniform(1.0, 40.0);
    p.x = 0.0;
  } else {
    p.mu = rng.uniform(1.0, 20.0);
    p.x = rng.uniform(1.5, 50.0);
    p.y = 0.0;
  }
  auto pt = coords(p);
  pt.push_back({"axis", axis == Axis::x ? 0.0 : 1.0});
  const double root = find_inflection(p, axis);
  MarcumPoint at = p;
  (axis == Axis::x ? at.x : at.y) = root;
  const SignRegion region = axis == Axis::x ? d2q_dx2_classify(at) : d2q_dy2_classify(at);
  ++r.checks;
  if (!region.bracket) {
    r.violations.push_back({pt, "root classified outside the indeterminate band", 1.0});
    return r;
  }
  const double lo = std::max(0.0, region.bracket->lo);
  const double hi = region.bracket->hi;
  r.require(pt, "root inside bracket", std::max(lo - root, root - hi) - kDefaultInflectionTolerance);

  // Ten-point straddle: five probes on each side of the root.
  const double spacing = std::min(0.05, 0.15 * root);
  const double h = spacing / 4.0;
  for (int j = 1; j <= 5; ++j) {
    MarcumPoint left = at;
    MarcumPoint right = at;
    (axis == Axis::x ? left.x : left.y) = root - j * spacing;
    (axis == Axis::x ? right.x : right.y) = root + j * spacing;
    const double d_left = second_difference(left, axis, h, o);
    const double d_right = second_difference(right, axis, h, o);
    // x: convex before the root, concave after; y: the reverse.
    const double sign = axis == Axis::x ? 1.0 : -1.0;
    r.require(pt, "finite-difference sign left of root", -(sign * d_left));
    r.require(pt, "finite-difference sign right of root", sign * d_right);
  }
  return r;
}

PointResult convexity_refusal_point(UniformStream& rng) {
  PointResult r;
  const MarcumPoint p{rng.uniform(0.01, 0.99), rng.uniform(0.1, 20.0), 0.0};
  ++r.checks;
  try {
    (void)find_inflection(p, Axis::y);
    r.violations.push_back({coords(p), "mu in (0,1) y-axis request not refused", 1.0});
  } catch (const NoInflectionError&) {
  }
  return r;
}

PointResult central_dominance_point(double a, double y) {
  constexpr double kSlack = 1e-12;
  PointResult r;
  const auto pt = coords(a, y);
  const GammaPoint g{a, y};
  const double u3 = central_bound(CentralBoundId::u3, g).value;
  const double uq = central_bound(CentralBoundId::UQ, g).value;
  const double big_l = central_bound(CentralBoundId::L_comb, g).value;
  const double lh_upper = central_bound(CentralBoundId::LH, g).value;
  const double l = central_bound(CentralBoundId::l_comb, g).value;
  const double lh = central_bound(CentralBoundId::lH, g).value;
  const double l1_six = central_bound(CentralBoundId::l1, g, 6).value;
  r.require_le(pt, "u3 <= UQ", u3, uq, kSlack);
  r.require_ge(pt, "L_comb >= LH", big_l, lh_upper, kSlack);
  const double margin = (lh - l) / lh - kSlack;
  if (margin > 0.0) {
    // Documented exception: near y = a with y < 6.5.
    auto where = pt;
    where.push_back({"y-a", y - a});
    r.exceptions.push_back({"l_comb >= lH", where, margin});
  }
  r.require_ge(pt, "max(l_comb, l1 with six terms) >= lH", std::max(l, l1_six), lh, kSlack);
  return r;
}

PointResult central_validity_point(double a, double y) {
  constexpr double kSlack = 1e-12;
  PointResult r;
  const auto pt = coords(a, y);
  static constexpr std::array<CentralBoundId, 20> kIds{
      CentralBoundId::l1, CentralBoundId::l2, CentralBoundId::l3, CentralBoundId::u1,
      CentralBoundId::u2, CentralBoundId::u3, CentralBoundId::L1, CentralBoundId::L2,
      CentralBoundId::L3, CentralBoundId::U1, CentralBoundId::l_comb, CentralBoundId::L_comb,
      CentralBoundId::UQ, CentralBoundId::lH, CentralBoundId::LH, CentralBoundId::b1_merkle,
      CentralBoundId::h_upper, CentralBoundId::h_lower_Lh, CentralBoundId::H_upper, CentralBoundId::p_ratio};
  for (CentralBoundId id : kIds) {
    const CentralBoundEvaluation b = central_bound(id, {a, y});
    if (!b.valid) continue;
    const double exact = central_target_value(b.target, {a, y});
    const std::string name(to_string(id));
    if (b.side == Side::lower) {
      r.require_le(pt, name, b.value, exact, kSlack);
    } else {
      r.require_ge(pt, name, b.value, exact, kSlack);
    }
  }
  if (a > 1.0) {
    r.require_le(pt, "h_a(y) < (a-1)y/a", gamma_ratio_h(a, y), (a - 1.0) * y / a, kSlack);
    // gamma(a+1) - (a+y) gamma(a) + (a-1) y gamma(a-1) = 0
    const long double g1 = lower_gamma(a + 1.0, y).to_long_double();
    const long double g0 = lower_gamma(a, y).to_long_double();
    const long double gm = lower_gamma(a - 1.0, y).to_long_double();
    const long double scale = std::max({g1, (a + y) * g0, (a - 1.0L) * y * gm});
    if (std::isfinite(static_cast<double>(scale)) && scale > 0.0L) {
      const double residual =
          static_cast<double>(std::abs(g1 - (a + y) * g0 + (a - 1.0L) * y * gm) / scale);
      r.require(pt, "gamma three-term recurrence", residual - 1e-11);
    }
  }
  return r;
}

PointResult oracle_consistency_point(const MarcumPoint& p) {
  PointResult r;
  const double mixture = q_by_poisson_mixture(p).value;
  const double quadrature = q_by_quadrature(p).q;
  r.require(coords(p), "|quadrature - mixture| <= 1e-12", std::abs(quadrature - mixture) - 1e-12);
  return r;
}

PointResult limits_point(const MarcumPoint& p, const VerifyOptions& o) {
  PointResult r;
  const auto pt = coords(p);
  const MarcumPoint central{p.mu, 0.0, p.y};
  const double q = marcum_q(central, o.series).value;
  const double ref = incgamma_regularized(p.mu, p.y).q;
  r.require(pt, "Q_mu(0,y) = Q(mu,y)", std::abs(q - ref) - 1e-12);

  // Just above the central threshold the Bessel path is used; the limits
  // are reached to far better than double precision there.
  const MarcumPoint near{p.mu, 1e-200, p.y};
  const double c = c_coefficient(near);
  r.require(pt, "c_mu(0+,y) = y/mu", std::abs(c / (p.y / p.mu) - 1.0) - 1e-13);
  const long double log_ref = p.mu * std::log(static_cast<long double>(p.y)) - p.y - std::lgamma(p.mu + 1.0L);
  const double f_ref = static_cast<double>(std::exp(log_ref));
  if (f_ref > 0.0 && std::isnormal(f_ref)) {
    r.require(pt, "F_mu(0,y) = y^mu e^-y / Gamma(mu+1)", std::abs(f_kernel(central).to_double() / f_ref - 1.0) - 1e-13);
    r.require(pt, "F_mu(0+,y) limit", std::abs(f_kernel(near).to_double() / f_ref - 1.0) - 1e-13);
  }
  return r;
}

PointResult convergence_run() {
  PointResult r;
  const MarcumPoint p{2.0, 3.0, 4.0};
  const auto pt = coords(p);
  double previous = kInf;
  for (std::size_t n = 0; n <= 20; ++n) {
    const RatioBoundsN b = ratio_p_convergent(p, n);
    const double gap = b.upper - b.lower;
    r.require(pt, "ratio gap strictly decreasing at n=" + std::to_string(n), gap >= previous ? 1.0 : 0.0);
    previous = gap;
    if (n == 20) r.require(pt, "ratio gap < 1e-10 at n=20", gap - 1e-10);
  }
  previous = kInf;
  for (std::size_t n = 0; n <= 20; ++n) {
    const BoundEvaluation upper = p_bound_sequence(p, n, PInner::pp2);
    const BoundEvaluation lower = p_bound_sequence(p, n, PInner::zero);
    if (!upper.valid) {
      r.require(pt, "sandwich upper valid at n=" + std::to_string(n), 1.0);
      continue;
    }
    const double gap = upper.value - lower.value;
    r.require(pt, "sequence gap decreasing at n=" + std::to_string(n), gap >= previous ? 1.0 : 0.0);
    previous = gap;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tables.

std::string_view to_string(TableBound label) {
  switch (label) {
    case TableBound::US1A: return "US1A";
    case TableBound::US1B: return "US1B";
    case TableBound::US2: return "US2";
    case TableBound::LS1: return "LS1";
    case TableBound::LS2: return "LS2";
  }
  return "unknown";
}

BoundId source_bound(TableBound label) {
  switch (label) {
    case TableBound::US1A: return BoundId::MES3;
    case TableBound::US1B: return BoundId::MES2;
    case TableBound::US2: return BoundId::MAS1;
    case TableBound::LS1: return BoundId::MAS3;
    case TableBound::LS2: return BoundId::MES1;
  }
  return BoundId::MES3;
}

const TableEntry* TableRow::find(TableBound label) const {
  for (const TableEntry& e : entries) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

double relative_error(double bound, double exact) {
  if (!(bound > 0.0) || !(exact > 0.0)) return kInf;
  return std::max(bound, exact) / std::min(bound, exact) - 1.0;
}

double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  const double magnitude = std::floor(std::log10(std::abs(value)));
  const double scale = std::pow(10.0, static_cast<double>(digits) - 1.0 - magnitude);
  return std::round(value * scale) / scale;
}

bool rounds_to(double value, double shown) {
  if (!std::isfinite(value) || !(shown > 0.0)) return false;
  return round_significant(value, 1) == round_significant(shown, 1) ||
         std::abs(round_significant(value, 1) / shown - 1.0) < 1e-9;
}

TableRow table_row(const MarcumPoint& p) {
  const OraclePair o = oracle_pq(p);
  TableRow row;
  row.mu = p.mu;
  row.x = p.x;
  row.y = p.y;
  row.q_oracle = o.q;
  row.p_oracle = o.p;
  row.smaller_target = o.q < o.p ? BoundTarget::Q : BoundTarget::P;
  for (TableBound label : kTableBounds) {
    const BoundEvaluation b = q_bound(source_bound(label), p);
    TableEntry e;
    e.label = label;
    e.source = b.id;
    e.side = b.side;
    e.value = b.value;
    e.valid = b.valid;
    if (!std::isfinite(b.value)) {
      e.rel_err = kInf;
    } else if (row.smaller_target == BoundTarget::Q) {
      e.rel_err = relative_error(b.value, o.q);
    } else {
      const double on_p = b.complement_value ? *b.complement_value : 1.0 - b.value;
      e.rel_err = relative_error(on_p, o.p);
    }
    row.entries.push_back(e);
  }
  return row;
}

std::optional<TablePreset> table_preset(std::string_view name) {
  if (name == "table1") {
    return TablePreset{"table1",
                       1.0,
                       {{1.0, {1.0, 4.0, 16.0}, {4.0, 16.0}},
                        {4.0, {1.0, 4.0, 16.0}, {16.0}},
                        {16.0, {1.0, 4.0, 16.0, 32.0}, {32.0}}}};
  }
  if (name == "table2") {
    return TablePreset{"table2",
                       16.0,
                       {{1.0, {1.0, 16.0, 32.0, 64.0}, {16.0, 32.0, 64.0}},
                        {16.0, {1.0, 16.0, 32.0, 64.0}, {32.0, 64.0}},
                        {32.0, {1.0, 16.0, 32.0, 64.0}, {64.0}}}};
  }
  return std::nullopt;
}

std::vector<TableRow> run_table(const TablePreset& preset) {
  std::vector<TableRow> rows;
  for (const TableBlock& block : preset.blocks) {
    for (double y : block.ys) {
      TableRow row = table_row({preset.mu, block.x, y});
      row.marked_q_smaller =
          std::find(block.q_smaller_ys.begin(), block.q_smaller_ys.end(), y) != block.q_smaller_ys.end();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<TableRow> run_grid(double mu, const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<TableRow> rows;
  for (double x : xs) {
    for (double y : ys) rows.push_back(table_row({mu, x, y}));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Suites.

namespace {

struct SuiteName {
  Suite suite;
  std::string_view name;
};

constexpr std::array<SuiteName, 11> kSuiteNames{{
    {Suite::complementarity, "complementarity"},
    {Suite::recurrences, "recurrences"},
    {Suite::bound_validity, "bound-validity"},
    {Suite::ratio_monotonicity, "ratio-monotonicity"},
    {Suite::turan, "turan"},
    {Suite::convexity, "convexity"},
    {Suite::central_dominance, "central-dominance"},
    {Suite::convergence, "convergence"},
    {Suite::central_validity, "central-validity"},
    {Suite::oracle_consistency, "oracle-consistency"},
    {Suite::limits, "limits"},
}};

}  // namespace

std::string_view to_string(Suite suite) {
  for (const SuiteName& s : kSuiteNames) {
    if (s.suite == suite) return s.name;
  }
  return "unknown";
}

std::optional<Suite> parse_suite(std::string_view text) {
  for (const SuiteName& s : kSuiteNames) {
    if (s.name == text) return s.suite;
  }
  return std::nullopt;
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = [] {
    std::vector<Suite> out;
    for (const SuiteName& s : kSuiteNames) out.push_back(s.suite);
    return out;
  }();
  return suites;
}

void sort_canonically(VerifyReport& report) {
  std::sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
    if (a.check != b.check) return a.check < b.check;
    return a.point < b.point;
  });
}

VerifyReport run_suite(Suite suite, std::size_t points, std::uint64_t seed, const VerifyOptions& options) {
  const unsigned threads = thread_count(options);
  switch (suite) {
    case Suite::complementarity:
    case Suite::recurrences:
    case Suite::bound_validity:
    case Suite::oracle_consistency:
    case Suite::limits: {
      const std::vector<NoncentralDraw> draws = draw_noncentral(points, seed);
      auto results = parallel_map(points, threads, [&](std::size_t i) {
        const MarcumPoint p{draws[i].mu, draws[i].x, draws[i].y};
        switch (suite) {
          case Suite::complementarity: return complementarity_point(p, options);
          case Suite::recurrences: return recurrence_point(p, options);
          case Suite::bound_validity: return bound_validity_point(p);
          case Suite::oracle_consistency: return oracle_consistency_point(p);
          default: return limits_point(p, options);
        }
      });
      VerifyReport report = collect(suite, points, seed, std::move(results));
      if (suite == Suite::complementarity) {
        report.notes.push_back("P is not evaluated at mu = 0, where Q_0 + P_0 = 1 - e^{-x}");
      }
      return report;
    }
    case Suite::ratio_monotonicity: {
      UniformStream rng(seed);
      struct Draw {
        MarcumPoint p;
        int coordinate;
        double step;
      };
      std::vector<Draw> draws(points);
      for (std::size_t i = 0; i < points; ++i) {
        draws[i].p = {rng.uniform(0.5, 50.0), rng.uniform(0.0, 100.0), rng.uniform_open_low(0.0, 100.0)};
        draws[i].coordinate = static_cast<int>(i % 3);
        draws[i].step = rng.uniform(0.1, 5.0);
      }
      auto results = parallel_map(points, threads, [&](std::size_t i) {
        return ratio_monotonicity_point(draws[i].p, draws[i].coordinate, draws[i].step, options);
      });
      return collect(suite, points, seed, std::move(results));
    }
    case Suite::turan: {
      // Each point yields one noncentral and one central check.
      const std::vector<NoncentralDraw> draws = draw_noncentral(points, seed);
      UniformStream rng(seed ^ 0x9e3779b97f4a7c15ULL);
      std::vector<std::pair<double, double>> central(points);
      for (auto& [a, y] : central) {
        a = rng.uniform_open_low(0.0, 100.0);
        y = rng.uniform_open_low(0.0, 200.0);
      }
      auto results = parallel_map(points, threads, [&](std::size_t i) {
        PointResult r = turan_noncentral_point({draws[i].mu, draws[i].x, draws[i].y}, options);
        PointResult c = turan_central_point(central[i].first, central[i].second);
        r.checks += c.checks;
        for (Violation& v : c.violations) r.violations.push_back(std::move(v));
        return r;
      });
      return collect(suite, points, seed, std::move(results));
    }
    case Suite::convexity: {
      // Parameters are drawn up front so the result does not depend on the
      // thread schedule.
      std::vector<std::uint64_t> seeds(points);
      UniformStream rng(seed);
      for (auto& s : seeds) s = static_cast<std::uint64_t>(rng.next() * 0x1.0p53);
      auto results = parallel_map(points, threads, [&](std::size_t i) {
        UniformStream local(seeds[i]);
        PointResult r = convexity_point(i, local, options);
        PointResult refusal = convexity_refusal_point(local);
        r.checks += refusal.checks;
        for (Violation& v : refusal.violations) r.violations.push_back(std::move(v));
        return r;
      });
      return collect(suite, points, seed, std::move(results));
    }
    case Suite::central_dominance: {
      // Half of the points over the full range, half near the transition
      // y = a where the claims are tight.
      UniformStream rng(seed);
      std::vector<std::pair<double, double>> draws(points);
      for (std::size_t i = 0; i < points; ++i) {
        if (i % 2 == 0) {
          draws[i] = {1.0 + rng.uniform_open_low(0.0, 99.0), rng.uniform_open_low(0.0, 200.0)};
        } else {
          draws[i] = {1.0 + rng.uniform_open_low(0.0, 11.0), rng.uniform_open_low(0.0, 14.0)};
        }
      }
      auto results = parallel_map(points, threads, [&](std::size_t i) {
        return central_dominance_point(draws[i].first, draws[i].second);
      });
      VerifyReport report = collect(suite, points, seed, std::move(results));
      for (ExceptionRegion& region : report.exception_regions) {
        for (const auto& [name, range] : region.ranges) {
          if (name == "y" && !(range.second < 6.5)) region.confined = false;
        }
        if (!region.confined) {
          report.violations.push_back({{}, region.check + ": exception set extends to y >= 6.5", region.worst_margin});
        }
      }
      return report;
    }
    case Suite::central_validity: {
      UniformStream rng(seed);
      std::vector<std::pair<double, double>> draws(points);
      for (auto& [a, y] : draws) {
        a = rng.uniform_open_low(0.0, 100.0);
        y = rng.uniform_open_low(0.0, 200.0);
      }
      auto results = parallel_map(points, threads, [&](std::size_t i) {
        return central_validity_point(draws[i].first, draws[i].second);
      });
      return collect(suite, points, seed, std::move(results));
    }
    case Suite::convergence: {
      std::vector<PointResult> results;
      results.push_back(convergence_run());
      return collect(suite, 1, seed, std::move(results));
    }
  }
  throw DomainError("unknown suite");
}

}  // namespace marcum::harness
