#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "marcum/bounds.hpp"
#include "marcum/central_gamma.hpp"
#include "marcum/convexity.hpp"
#include "marcum/errors.hpp"
#include "marcum/harness.hpp"
#include "marcum/marcum.hpp"

namespace marcum::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kCsvHeader = "mu,x,y,bound_id,side,value,valid,rel_err,target";

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

/// Short form for values already rounded to a few significant digits.
std::string short_number(double v) {
  if (!std::isfinite(v)) return number(v);
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

/// JSON has no representation for NaN or infinity; those become null.
Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

SeriesConfig series_config() {
  SeriesConfig config;
  if (const char* env = std::getenv("MARCUM_EPS")) {
    char* end = nullptr;
    const double eps = std::strtod(env, &end);
    if (end != env && *end == '\0' && eps > 0.0 && eps < 1.0) config.eps = eps;
  }
  return config;
}

/// Writes to --out when given, otherwise to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file: " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

// ---------------------------------------------------------------------------
// Shared option bundles.

struct PointOptions {
  double mu = kNaN;
  double x = kNaN;
  double y = kNaN;
  double a = kNaN;
};

void add_point_options(CLI::App* cmd, PointOptions& p) {
  cmd->add_option("--mu", p.mu, "order mu");
  cmd->add_option("--x", p.x, "non-centrality x >= 0");
  cmd->add_option("--y", p.y, "threshold y > 0");
  cmd->add_option("--a", p.a, "incomplete gamma shape a (central functions)");
}

MarcumPoint require_noncentral(const PointOptions& p) {
  if (std::isnan(p.mu) || std::isnan(p.x) || std::isnan(p.y)) {
    throw CLI::ValidationError("--mu, --x and --y are required");
  }
  return {p.mu, p.x, p.y};
}

GammaPoint require_central(const PointOptions& p) {
  const double a = std::isnan(p.a) ? p.mu : p.a;
  if (std::isnan(a) || std::isnan(p.y)) throw CLI::ValidationError("--a (or --mu) and --y are required");
  return {a, p.y};
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  PointOptions point;
  std::string func = "Q";
  std::string format = "text";
  std::string out;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  EvalReport report;
  if (o.func == "Q" || o.func == "P") {
    const MarcumPoint p = require_noncentral(o.point);
    if (o.func == "P" && p.mu == 0.0) {
      throw DomainError(
          "P is not evaluated at mu = 0: the limit mu -> 0 is discontinuous and P_0 + Q_0 = 1 - e^{-x}");
    }
    report = o.func == "Q" ? marcum_q(p, series_config()) : marcum_p(p, series_config());
  } else {
    const GammaPoint g = require_central(o.point);
    const LogScaled v = o.func == "gamma" ? lower_gamma(g.a, g.y) : upper_gamma(g.a, g.y);
    report.value = v.to_double();
    report.abs_error_est = 1e-14 * std::abs(report.value);
    report.terms_used = 1;
    report.method = Method::central;
  }
  Sink sink(o.out, out);
  if (o.format == "json") {
    Json j;
    j["func"] = o.func;
    j["value"] = json_number(report.value);
    j["abs_error_est"] = json_number(report.abs_error_est);
    j["terms_used"] = report.terms_used;
    j["method"] = std::string(to_string(report.method));
    sink.get() << j.dump(2) << "\n";
  } else {
    sink.get() << "value=" << number(report.value) << "\n"
               << "abs_error_est=" << number(report.abs_error_est) << "\n"
               << "terms_used=" << report.terms_used << "\n"
               << "method=" << to_string(report.method) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsOptions {
  PointOptions point;
  std::string target = "Q";
  std::size_t n = 5;
  bool oracle = false;
  std::string format = "text";
  std::string out;
};

struct BoundRecord {
  std::string id;
  std::string side;
  double value = kNaN;
  bool valid = false;
  std::string condition;
  double rel_err = kNaN;
};

std::vector<BoundRecord> noncentral_records(const BoundsOptions& o, const MarcumPoint& p) {
  std::vector<BoundRecord> records;
  std::optional<OraclePair> here;
  std::optional<OraclePair> next;
  if (o.oracle) {
    here = oracle_pq(p);
    if (o.target == "ratioP" || o.target == "ratioQ") next = oracle_pq({p.mu + 1.0, p.x, p.y});
  }
  auto push = [&](std::string id, const BoundEvaluation& b, double exact) {
    BoundRecord r{std::move(id), std::string(to_string(b.side)), b.value, b.valid, b.condition, kNaN};
    if (o.oracle) r.rel_err = harness::relative_error(b.value, exact);
    records.push_back(std::move(r));
  };
  const std::string n_text = std::to_string(o.n);
  if (o.target == "Q") {
    for (BoundId id : {BoundId::MES1, BoundId::MES2, BoundId::MES3, BoundId::MAS1, BoundId::MAS2, BoundId::MAS3}) {
      const BoundEvaluation b = q_bound(id, p);
      BoundRecord r{std::string(to_string(id)), std::string(to_string(b.side)), b.value, b.valid, b.condition, kNaN};
      if (here && std::isfinite(b.value)) {
        // Relative error on the smaller tail, as in the comparison tables.
        if (here->q <= here->p) {
          r.rel_err = harness::relative_error(b.value, here->q);
        } else {
          r.rel_err = harness::relative_error(b.complement_value.value_or(1.0 - b.value), here->p);
        }
      }
      records.push_back(std::move(r));
    }
  } else if (o.target == "P") {
    const double exact = here ? here->p : kNaN;
    push("betterlo", p_bound_better(p), exact);
    for (PInner inner : {PInner::zero, PInner::mas1_complement, PInner::pp2, PInner::betterlo}) {
      push("sequence[" + std::string(to_string(inner)) + "](n=" + n_text + ")", p_bound_sequence(p, o.n, inner),
           exact);
    }
    push("superior(n=" + n_text + ")", p_upper_superior(p, o.n), exact);
    const BoundPair gs = p_bounds_gamma_series(p, o.n);
    push("qratio_lower(n=" + n_text + ")", gs.lower, exact);
    push("qratio_upper(n=" + n_text + ")", gs.upper, exact);
  } else if (o.target == "ratioP") {
    const double exact = here ? next->p / here->p : kNaN;
    const BoundPair simple = ratio_p_simple(p);
    push("ratio_p_lower", simple.lower, exact);
    push("ratio_p_upper", simple.upper, exact);
    const RatioBoundsN conv = ratio_p_convergent(p, o.n);
    BoundEvaluation lower;
    lower.side = Side::lower;
    lower.value = conv.lower;
    lower.valid = true;
    lower.condition = "mu > 0";
    BoundEvaluation upper = lower;
    upper.side = Side::upper;
    upper.value = conv.upper;
    push("l(n=" + n_text + ")", lower, exact);
    push("u(n=" + n_text + ")", upper, exact);
    BoundEvaluation cf = upper;
    cf.condition = "all continued-fraction denominators positive";
    try {
      cf.value = ratio_p_cf_upper(p, o.n);
    } catch (const InvalidRegionError&) {
      cf.value = kNaN;
      cf.valid = false;
    }
    push("ratio_p_cf_upper(k=" + n_text + ")", cf, exact);
  } else if (o.target == "ratioQ") {
    const double exact = here ? next->q / here->q : kNaN;
    const BoundPair b = ratio_q_bounds(p);
    push("ratio_q_lower", b.lower, exact);
    push("ratio_q_upper", b.upper, exact);
  }
  return records;
}

std::vector<BoundRecord> central_records(const BoundsOptions& o, const GammaPoint& g) {
  std::vector<CentralBoundId> ids;
  if (o.target == "gamma") {
    ids = {CentralBoundId::l1, CentralBoundId::l2, CentralBoundId::l3, CentralBoundId::u1,
           CentralBoundId::u2, CentralBoundId::u3, CentralBoundId::l_comb, CentralBoundId::UQ,
           CentralBoundId::lH, CentralBoundId::b1_merkle};
  } else if (o.target == "Gamma") {
    ids = {CentralBoundId::L1, CentralBoundId::L2, CentralBoundId::L3, CentralBoundId::U1,
           CentralBoundId::L_comb, CentralBoundId::LH};
  } else if (o.target == "h") {
    ids = {CentralBoundId::h_upper, CentralBoundId::h_lower_Lh, CentralBoundId::p_ratio};
  } else {
    ids = {CentralBoundId::H_upper};
  }
  std::vector<BoundRecord> records;
  for (CentralBoundId id : ids) {
    const CentralBoundEvaluation b = central_bound(id, g);
    BoundRecord r{std::string(to_string(id)), std::string(to_string(b.side)), b.value, b.valid, b.condition, kNaN};
    if (o.oracle) r.rel_err = harness::relative_error(b.value, central_target_value(b.target, g));
    records.push_back(std::move(r));
  }
  return records;
}

int cmd_bounds(const BoundsOptions& o, std::ostream& out) {
  const bool central = o.target == "gamma" || o.target == "Gamma" || o.target == "h" || o.target == "H";
  double mu = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::vector<BoundRecord> records;
  if (central) {
    const GammaPoint g = require_central(o.point);
    mu = g.a;
    y = g.y;
    records = central_records(o, g);
  } else {
    const MarcumPoint p = require_noncentral(o.point);
    mu = p.mu;
    x = p.x;
    y = p.y;
    records = noncentral_records(o, p);
  }
  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  if (o.format == "csv") {
    // For central targets the mu column carries a and x is 0.
    s << kCsvHeader << "\n";
    for (const BoundRecord& r : records) {
      s << number(mu) << "," << number(x) << "," << number(y) << "," << r.id << "," << r.side << ","
        << number(r.value) << "," << (r.valid ? "true" : "false") << "," << (o.oracle ? number(r.rel_err) : "")
        << "," << o.target << "\n";
    }
  } else if (o.format == "json") {
    Json j;
    j["target"] = o.target;
    j[central ? "a" : "mu"] = mu;
    if (!central) j["x"] = x;
    j["y"] = y;
    Json list = Json::array();
    for (const BoundRecord& r : records) {
      Json e;
      e["id"] = r.id;
      e["side"] = r.side;
      e["value"] = json_number(r.value);
      e["valid"] = r.valid;
      e["condition"] = r.condition;
      if (o.oracle) e["rel_err"] = json_number(r.rel_err);
      list.push_back(std::move(e));
    }
    j["bounds"] = std::move(list);
    s << j.dump(2) << "\n";
  } else {
    for (const BoundRecord& r : records) {
      s << std::left << std::setw(28) << r.id << std::setw(6) << r.side << " value=" << std::setw(24)
        << number(r.value) << " valid=" << (r.valid ? "yes" : "no ");
      if (o.oracle) s << " rel_err=" << number(r.rel_err);
      s << "  [" << r.condition << "]\n";
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// table

struct TableOptions {
  std::string preset;
  double mu = kNaN;
  std::vector<double> xs;
  std::vector<double> ys;
  std::string format = "csv";
  std::string out;
};

int cmd_table(const TableOptions& o, std::ostream& out) {
  std::vector<harness::TableRow> rows;
  if (!o.preset.empty()) {
    const auto preset = harness::table_preset(o.preset);
    if (!preset) throw CLI::ValidationError("unknown preset: " + o.preset);
    rows = harness::run_table(*preset);
  } else {
    if (std::isnan(o.mu) || o.xs.empty() || o.ys.empty()) {
      throw CLI::ValidationError("either --preset or --mu with --x-list and --y-list is required");
    }
    rows = harness::run_grid(o.mu, o.xs, o.ys);
  }
  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  if (o.format == "json") {
    Json list = Json::array();
    for (const harness::TableRow& row : rows) {
      Json j;
      j["mu"] = row.mu;
      j["x"] = row.x;
      j["y"] = row.y;
      j["q_oracle"] = json_number(row.q_oracle);
      j["p_oracle"] = json_number(row.p_oracle);
      j["smaller_target"] = std::string(to_string(row.smaller_target));
      if (row.marked_q_smaller) j["marked_q_smaller"] = *row.marked_q_smaller;
      Json entries = Json::array();
      for (const harness::TableEntry& e : row.entries) {
        Json k;
        k["bound_id"] = std::string(harness::to_string(e.label));
        k["source"] = std::string(to_string(e.source));
        k["side"] = std::string(to_string(e.side));
        k["value"] = json_number(e.value);
        k["valid"] = e.valid;
        k["rel_err"] = json_number(e.rel_err);
        k["rel_err_rounded"] = json_number(harness::round_significant(e.rel_err, 1));
        entries.push_back(std::move(k));
      }
      j["entries"] = std::move(entries);
      list.push_back(std::move(j));
    }
    s << list.dump(2) << "\n";
  } else if (o.format == "text") {
    for (const harness::TableRow& row : rows) {
      s << "mu=" << number(row.mu) << " x=" << number(row.x) << " y=" << number(row.y)
        << " Q=" << number(row.q_oracle) << " P=" << number(row.p_oracle)
        << " smaller=" << to_string(row.smaller_target) << "\n";
      for (const harness::TableEntry& e : row.entries) {
        if (!e.valid) continue;
        s << "  " << std::left << std::setw(5) << harness::to_string(e.label) << " ("
          << short_number(harness::round_significant(e.rel_err, 1)) << ")  raw=" << number(e.rel_err) << "\n";
      }
    }
  } else {
    // The target column names the tail the relative error refers to.
    s << kCsvHeader << "\n";
    for (const harness::TableRow& row : rows) {
      for (const harness::TableEntry& e : row.entries) {
        s << number(row.mu) << "," << number(row.x) << "," << number(row.y) << "," << harness::to_string(e.label)
          << "," << to_string(e.side) << "," << number(e.value) << "," << (e.valid ? "true" : "false") << ","
          << number(e.rel_err) << "," << to_string(row.smaller_target) << "\n";
      }
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptionsCli {
  std::string suite;
  std::size_t points = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
};

Json report_json(const harness::VerifyReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["points"] = r.points;
  j["checks"] = r.checks;
  j["passed"] = r.passed();
  Json violations = Json::array();
  for (const harness::Violation& v : r.violations) {
    Json e;
    Json point = Json::object();
    for (const auto& [name, value] : v.point) point[name] = json_number(value);
    e["point"] = std::move(point);
    e["check"] = v.check;
    e["margin"] = json_number(v.margin);
    violations.push_back(std::move(e));
  }
  j["violations"] = std::move(violations);
  Json regions = Json::array();
  for (const harness::ExceptionRegion& region : r.exception_regions) {
    Json e;
    e["check"] = region.check;
    e["count"] = region.count;
    e["confined"] = region.confined;
    e["worst_margin"] = json_number(region.worst_margin);
    Json ranges = Json::object();
    for (const auto& [name, range] : region.ranges) ranges[name] = Json::array({range.first, range.second});
    e["ranges"] = std::move(ranges);
    regions.push_back(std::move(e));
  }
  j["exception_regions"] = std::move(regions);
  j["notes"] = r.notes;
  return j;
}

int cmd_verify(const VerifyOptionsCli& o, std::ostream& out) {
  const auto suite = harness::parse_suite(o.suite);
  if (!suite) throw CLI::ValidationError("unknown suite: " + o.suite);
  harness::VerifyOptions options;
  options.threads = o.threads;
  options.series = series_config();
  const harness::VerifyReport report = harness::run_suite(*suite, o.points, o.seed, options);
  Sink sink(o.out, out);
  sink.get() << report_json(report).dump(2) << "\n";
  return report.passed() ? kOk : kViolations;
}

// ---------------------------------------------------------------------------
// inflection

struct InflectionOptions {
  double mu = kNaN;
  double x = kNaN;
  double y = kNaN;
  std::string axis = "x";
  double tol = kDefaultInflectionTolerance;
  std::string format = "text";
};

int cmd_inflection(const InflectionOptions& o, std::ostream& out) {
  if (std::isnan(o.mu)) throw CLI::ValidationError("--mu is required");
  const Axis axis = o.axis == "x" ? Axis::x : Axis::y;
  const double fixed = axis == Axis::x ? o.y : o.x;
  if (std::isnan(fixed)) {
    throw CLI::ValidationError(axis == Axis::x ? "--y is required for --axis x" : "--x is required for --axis y");
  }
  MarcumPoint p{o.mu, axis == Axis::x ? 0.0 : o.x, axis == Axis::x ? o.y : 0.0};
  const double root = find_inflection(p, axis, o.tol);
  (axis == Axis::x ? p.x : p.y) = root;
  const SignRegion region = axis == Axis::x ? d2q_dx2_classify(p) : d2q_dy2_classify(p);
  Json j;
  j["mu"] = o.mu;
  j["axis"] = o.axis;
  j[axis == Axis::x ? "y" : "x"] = fixed;
  j["region"] = std::string(to_string(region.sign));
  if (region.bracket) j["bracket"] = Json::array({region.bracket->lo, region.bracket->hi});
  j["root"] = root;
  j["tol"] = o.tol;
  // Classification of a user-given full point, when both coordinates were set.
  std::optional<SignRegion> at_point;
  if (!std::isnan(o.x) && !std::isnan(o.y)) {
    const MarcumPoint q{o.mu, o.x, o.y};
    at_point = axis == Axis::x ? d2q_dx2_classify(q) : d2q_dy2_classify(q);
    j["sign_at_point"] = std::string(to_string(at_point->sign));
  }
  if (o.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << "axis=" << o.axis << "\n"
        << "region=" << to_string(region.sign) << "\n";
    if (region.bracket) out << "bracket=[" << number(region.bracket->lo) << ", " << number(region.bracket->hi) << "]\n";
    out << "root=" << number(root) << "\n";
    if (at_point) out << "sign_at_point=" << to_string(at_point->sign) << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Marcum functions: evaluation, bounds, tables and verification"};
  app.require_subcommand(1);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate Q, P, gamma or Gamma at one point");
  add_point_options(eval_cmd, eval.point);
  eval_cmd->add_option("--func", eval.func, "function")->check(CLI::IsMember({"Q", "P", "gamma", "Gamma"}));
  eval_cmd->add_option("--format", eval.format, "output format")->check(CLI::IsMember({"text", "json"}));
  eval_cmd->add_option("--out", eval.out, "output file");

  BoundsOptions bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "list every applicable bound at one point");
  add_point_options(bounds_cmd, bounds.point);
  bounds_cmd->add_option("--target", bounds.target, "bounded quantity")
      ->check(CLI::IsMember({"Q", "P", "gamma", "Gamma", "ratioP", "ratioQ", "h", "H"}));
  bounds_cmd->add_option("--n", bounds.n, "index for convergent families");
  bounds_cmd->add_flag("--oracle", bounds.oracle, "add relative errors against the reference values");
  bounds_cmd->add_option("--format", bounds.format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
  bounds_cmd->add_option("--out", bounds.out, "output file");

  TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "comparison table of the own noncentral bounds");
  table_cmd->add_option("--preset", table.preset, "table1 or table2")->check(CLI::IsMember({"table1", "table2"}));
  table_cmd->add_option("--mu", table.mu, "order mu");
  table_cmd->add_option("--x-list", table.xs, "comma-separated x values")->delimiter(',');
  table_cmd->add_option("--y-list", table.ys, "comma-separated y values")->delimiter(',');
  table_cmd->add_option("--format", table.format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
  table_cmd->add_option("--out", table.out, "output file");

  VerifyOptionsCli verify;
  auto* verify_cmd = app.add_subcommand("verify", "run a property sweep; exit 0 iff no violations");
  std::vector<std::string> suite_names;
  for (harness::Suite s : harness::all_suites()) suite_names.emplace_back(harness::to_string(s));
  verify_cmd->add_option("--suite", verify.suite, "suite name")->required()->check(CLI::IsMember(suite_names));
  verify_cmd->add_option("--points", verify.points, "number of sample points");
  verify_cmd->add_option("--seed", verify.seed, "seed of the MT19937-64 stream");
  verify_cmd->add_option("--threads", verify.threads, "worker threads (0: all cores)");
  verify_cmd->add_option("--out", verify.out, "JSON report file");

  InflectionOptions inflection;
  auto* inflection_cmd = app.add_subcommand("inflection", "locate the inflection point of Q along an axis");
  inflection_cmd->add_option("--mu", inflection.mu, "order mu")->required();
  inflection_cmd->add_option("--x", inflection.x, "fixed x (axis y)");
  inflection_cmd->add_option("--y", inflection.y, "fixed y (axis x)");
  inflection_cmd->add_option("--axis", inflection.axis, "search axis")->check(CLI::IsMember({"x", "y"}));
  inflection_cmd->add_option("--tol", inflection.tol, "bisection tolerance (>= 1e-12)");
  inflection_cmd->add_option("--format", inflection.format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*bounds_cmd) return cmd_bounds(bounds, out);
    if (*table_cmd) return cmd_table(table, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*inflection_cmd) return cmd_inflection(inflection, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const NoInflectionError& e) {
    err << "no inflection: " << e.what() << "\n";
    return kNoInflection;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const InvalidRegionError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace marcum::cli
