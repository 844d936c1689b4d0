#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "marcum/bound_types.hpp"
#include "marcum/bounds.hpp"
#include "marcum/marcum.hpp"

namespace marcum::harness {

// ---------------------------------------------------------------------------
// Comparison tables for the five own noncentral bounds.

enum class TableBound { US1A, US1B, US2, LS1, LS2 };

std::string_view to_string(TableBound label);
/// The q_bound id behind a table label.
BoundId source_bound(TableBound label);

struct TableEntry {
  TableBound label = TableBound::US1A;
  BoundId source = BoundId::MES3;
  Side side = Side::upper;
  double value = 0.0;    ///< the bound on Q
  double rel_err = 0.0;  ///< max/min - 1 against the smaller of P and Q
  bool valid = false;
};

struct TableRow {
  double mu = 0.0;
  double x = 0.0;
  double y = 0.0;
  double q_oracle = 0.0;
  double p_oracle = 0.0;
  BoundTarget smaller_target = BoundTarget::P;
  /// Whether the published grid marks this y as Q-smaller (presets only).
  std::optional<bool> marked_q_smaller;
  std::vector<TableEntry> entries;

  const TableEntry* find(TableBound label) const;
};

/// max(bound, exact) / min(bound, exact) - 1; +inf when the bound is not
/// positive.
double relative_error(double bound, double exact);

/// Rounds to the given number of significant decimal digits.
double round_significant(double value, int digits = 1);

/// True when value rounds to `shown` at one significant digit, i.e. lies in
/// the half-open rounding interval around it.
bool rounds_to(double value, double shown);

TableRow table_row(const MarcumPoint& p);

struct TableBlock {
  double x = 0.0;
  std::vector<double> ys;
  std::vector<double> q_smaller_ys;
};

struct TablePreset {
  std::string name;
  double mu = 0.0;
  std::vector<TableBlock> blocks;
};

/// "table1" (mu = 1) or "table2" (mu = 16).
std::optional<TablePreset> table_preset(std::string_view name);

std::vector<TableRow> run_table(const TablePreset& preset);
std::vector<TableRow> run_grid(double mu, const std::vector<double>& xs, const std::vector<double>& ys);

// ---------------------------------------------------------------------------
// Property sweeps.

enum class Suite {
  complementarity,
  recurrences,
  bound_validity,
  ratio_monotonicity,
  turan,
  convexity,
  central_dominance,
  convergence,
  central_validity,
  oracle_consistency,
  limits
};

std::string_view to_string(Suite suite);
std::optional<Suite> parse_suite(std::string_view text);
const std::vector<Suite>& all_suites();

/// A failed check: where, which inequality, and by how much (relative; a
/// positive margin is the size of the violation).
struct Violation {
  std::vector<std::pair<std::string, double>> point;
  std::string check;
  double margin = 0.0;
};

/// A documented exception: a set of points where a claim is known not to
/// hold, summarised by the coordinate ranges it occupies.
struct ExceptionRegion {
  std::string check;
  std::size_t count = 0;
  std::vector<std::pair<std::string, std::pair<double, double>>> ranges;
  double worst_margin = 0.0;
  bool confined = true;  ///< inside the documented region
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  std::size_t checks = 0;
  std::vector<Violation> violations;
  std::vector<ExceptionRegion> exception_regions;
  std::vector<std::string> notes;

  bool passed() const { return violations.empty(); }
};

struct VerifyOptions {
  std::size_t threads = 0;  ///< 0: hardware concurrency
  SeriesConfig series{};
};

VerifyReport run_suite(Suite suite, std::size_t points, std::uint64_t seed, const VerifyOptions& options = {});

/// Order-independent presentation: violations sorted by check, then point.
void sort_canonically(VerifyReport& report);

}  // namespace marcum::harness
