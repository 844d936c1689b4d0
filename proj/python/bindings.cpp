#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "marcum/bessel.hpp"
#include "marcum/bounds.hpp"
#include "marcum/central_gamma.hpp"
#include "marcum/convexity.hpp"
#include "marcum/errors.hpp"
#include "marcum/harness.hpp"
#include "marcum/marcum.hpp"

namespace py = pybind11;
using namespace marcum;

namespace {

BoundId bound_id_from(const std::string& name) {
  const auto id = parse_bound_id(name);
  if (!id) throw DomainError("unknown bound id: " + name);
  return *id;
}

CentralBoundId central_id_from(const std::string& name) {
  const auto id = parse_central_bound_id(name);
  if (!id) throw DomainError("unknown central bound id: " + name);
  return *id;
}

Axis axis_from(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  throw DomainError("axis must be 'x' or 'y'");
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["abs_error_est"] = r.abs_error_est;
  d["terms_used"] = r.terms_used;
  d["method"] = std::string(to_string(r.method));
  return d;
}

py::dict bound_dict(const BoundEvaluation& b) {
  py::dict d;
  d["id"] = std::string(to_string(b.id));
  d["side"] = std::string(to_string(b.side));
  d["target"] = std::string(to_string(b.target));
  d["value"] = b.value;
  d["valid"] = b.valid;
  d["condition"] = b.condition;
  if (b.complement_value) d["complement_value"] = *b.complement_value;
  return d;
}

py::dict central_dict(const CentralBoundEvaluation& b) {
  py::dict d;
  d["id"] = std::string(to_string(b.id));
  d["side"] = std::string(to_string(b.side));
  d["target"] = std::string(to_string(b.target));
  d["value"] = b.value;
  d["valid"] = b.valid;
  d["condition"] = b.condition;
  return d;
}

py::dict region_dict(const SignRegion& r) {
  py::dict d;
  d["sign"] = std::string(to_string(r.sign));
  if (r.bracket) {
    d["bracket"] = py::make_tuple(r.bracket->lo, r.bracket->hi);
  } else {
    d["bracket"] = py::none();
  }
  d["boundary_point"] = r.boundary_point;
  return d;
}

py::list table_rows(const std::vector<harness::TableRow>& rows) {
  py::list out;
  for (const harness::TableRow& row : rows) {
    py::dict d;
    d["mu"] = row.mu;
    d["x"] = row.x;
    d["y"] = row.y;
    d["q_oracle"] = row.q_oracle;
    d["p_oracle"] = row.p_oracle;
    d["smaller_target"] = std::string(to_string(row.smaller_target));
    py::list entries;
    for (const harness::TableEntry& e : row.entries) {
      py::dict k;
      k["bound_id"] = std::string(harness::to_string(e.label));
      k["source"] = std::string(to_string(e.source));
      k["side"] = std::string(to_string(e.side));
      k["value"] = e.value;
      k["valid"] = e.valid;
      k["rel_err"] = e.rel_err;
      entries.append(k);
    }
    d["entries"] = entries;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_marcum, m) {
  m.doc() = "Generalized Marcum functions, their bounds and the incomplete gamma bounds";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NoInflectionError>(m, "NoInflectionError", PyExc_ValueError);
  py::register_exception<InvalidRegionError>(m, "InvalidRegionError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<ToleranceError>(m, "ToleranceError", PyExc_RuntimeError);

  // Bessel kernel.
  m.def(
      "bessel_i_scaled",
      [](double nu, double t) { return bessel_i_scaled(nu, t).to_double(); },
      py::arg("nu"), py::arg("t"), "e^{-t} I_nu(t) rounded to double");
  m.def(
      "bessel_i_scaled_log",
      [](double nu, double t) { return bessel_i_scaled(nu, t).log(); },
      py::arg("nu"), py::arg("t"), "log(e^{-t} I_nu(t)); -inf when the value is zero");
  m.def("bessel_ratio", py::overload_cast<double, double>(&bessel_ratio), py::arg("nu"), py::arg("t"),
        "I_nu(t) / I_{nu-1}(t)");
  m.def(
      "bessel_ratio_bounds",
      [](double nu, double t) {
        const RatioBoundPair b = bessel_ratio_bounds(nu, t);
        py::dict d;
        d["lower"] = b.lower;
        d["upper_general"] = b.upper_general;
        d["upper_half_shift"] = b.upper_half_shift ? py::cast(*b.upper_half_shift) : py::none();
        return d;
      },
      py::arg("nu"), py::arg("t"));

  // Marcum functions.
  m.def(
      "marcum_q", [](double mu, double x, double y) { return report_dict(marcum_q({mu, x, y})); },
      py::arg("mu"), py::arg("x"), py::arg("y"));
  m.def(
      "marcum_p", [](double mu, double x, double y) { return report_dict(marcum_p({mu, x, y})); },
      py::arg("mu"), py::arg("x"), py::arg("y"));
  m.def(
      "q_by_poisson_mixture",
      [](double mu, double x, double y) { return report_dict(q_by_poisson_mixture({mu, x, y})); },
      py::arg("mu"), py::arg("x"), py::arg("y"));
  m.def(
      "oracle_pq",
      [](double mu, double x, double y) {
        const OraclePair o = oracle_pq({mu, x, y});
        py::dict d;
        d["q"] = o.q;
        d["p"] = o.p;
        d["abs_error_est"] = o.abs_error_est;
        d["integrated_q"] = o.integrated_q;
        return d;
      },
      py::arg("mu"), py::arg("x"), py::arg("y"));
  m.def(
      "f_kernel", [](double mu, double x, double y) { return f_kernel({mu, x, y}).to_double(); },
      py::arg("mu"), py::arg("x"), py::arg("y"));
  m.def(
      "c_coefficient",
      [](double mu, double x, double y, int shift) { return c_coefficient({mu, x, y}, shift); },
      py::arg("mu"), py::arg("x"), py::arg("y"), py::arg("shift") = 0);
  m.def(
      "is_q_positive_guaranteed",
      [](double mu, double x, double y) { return is_q_positive_guaranteed({mu, x, y}); }, py::arg("mu"),
      py::arg("x"), py::arg("y"));

  // Noncentral bounds.
  m.def(
      "q_bound",
      [](const std::string& id, double mu, double x, double y) {
        return bound_dict(q_bound(bound_id_from(id), {mu, x, y}));
      },
      py::arg("id"), py::arg("mu"), py::arg("x"), py::arg("y"));
  m.def(
      "p_bound_better", [](double mu, double x, double y) { return bound_dict(p_bound_better({mu, x, y})); },
      py::arg("mu"), py::arg("x"), py::arg("y"));
  m.def(
      "ratio_p_convergent",
      [](double mu, double x, double y, std::size_t n) {
        const RatioBoundsN b = ratio_p_convergent({mu, x, y}, n);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("mu"), py::arg("x"), py::arg("y"), py::arg("n"));
  m.def(
      "ratio_p_cf_upper",
      [](double mu, double x, double y, std::size_t k) { return ratio_p_cf_upper({mu, x, y}, k); },
      py::arg("mu"), py::arg("x"), py::arg("y"), py::arg("k") = 0);
  m.def(
      "p_bound_sequence",
      [](double mu, double x, double y, std::size_t n, const std::string& inner) {
        const auto which = parse_p_inner(inner);
        if (!which) throw DomainError("unknown inner bound: " + inner);
        return bound_dict(p_bound_sequence({mu, x, y}, n, *which));
      },
      py::arg("mu"), py::arg("x"), py::arg("y"), py::arg("n"), py::arg("inner") = "zero");
  m.def(
      "p_bounds_gamma_series",
      [](double mu, double x, double y, std::size_t n) {
        const BoundPair b = p_bounds_gamma_series({mu, x, y}, n);
        return py::make_tuple(b.lower.value, b.upper.value);
      },
      py::arg("mu"), py::arg("x"), py::arg("y"), py::arg("n"));

  // Central case.
  m.def(
      "incgamma",
      [](double a, double y) {
        const IncGamma g = incgamma_regularized(a, y);
        return py::make_tuple(g.p, g.q);
      },
      py::arg("a"), py::arg("y"), "regularized (P(a,y), Q(a,y))");
  m.def(
      "lower_gamma", [](double a, double y) { return lower_gamma(a, y).to_double(); }, py::arg("a"), py::arg("y"));
  m.def(
      "upper_gamma", [](double a, double y) { return upper_gamma(a, y).to_double(); }, py::arg("a"), py::arg("y"));
  m.def(
      "central_bound",
      [](const std::string& id, double a, double y, int l1_terms) {
        return central_dict(central_bound(central_id_from(id), {a, y}, l1_terms));
      },
      py::arg("id"), py::arg("a"), py::arg("y"), py::arg("l1_terms") = kDefaultL1Terms);

  // Convexity.
  m.def(
      "d2q_dx2_classify",
      [](double mu, double x, double y) { return region_dict(d2q_dx2_classify({mu, x, y})); }, py::arg("mu"),
      py::arg("x"), py::arg("y"));
  m.def(
      "d2q_dy2_classify",
      [](double mu, double x, double y) { return region_dict(d2q_dy2_classify({mu, x, y})); }, py::arg("mu"),
      py::arg("x"), py::arg("y"));
  m.def(
      "find_inflection",
      [](double mu, const std::string& axis, double fixed, double tol) {
        const Axis a = axis_from(axis);
        const MarcumPoint p{mu, a == Axis::x ? 0.0 : fixed, a == Axis::x ? fixed : 0.0};
        return find_inflection(p, a, tol);
      },
      py::arg("mu"), py::arg("axis"), py::arg("fixed"), py::arg("tol") = kDefaultInflectionTolerance,
      "inflection coordinate along axis, the other coordinate held at `fixed`");

  // Harness.
  m.def(
      "table",
      [](const std::string& preset) {
        const auto p = harness::table_preset(preset);
        if (!p) throw DomainError("unknown preset: " + preset);
        return table_rows(harness::run_table(*p));
      },
      py::arg("preset"));
  m.def(
      "verify",
      [](const std::string& suite, std::size_t points, std::uint64_t seed) {
        const auto s = harness::parse_suite(suite);
        if (!s) throw DomainError("unknown suite: " + suite);
        harness::VerifyReport r;
        {
          py::gil_scoped_release release;
          r = harness::run_suite(*s, points, seed);
        }
        py::dict d;
        d["suite"] = r.suite;
        d["points"] = r.points;
        d["checks"] = r.checks;
        d["violations"] = r.violations.size();
        d["passed"] = r.passed();
        return d;
      },
      py::arg("suite"), py::arg("points"), py::arg("seed"));
}
