#pragma once

// Closed-form adder/delay counts and their reconciliation with counts taken
// from synthesized graphs.

#include "ffa/numeric.hpp"
#include "ffa/structure_graph.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ffa {

enum class CostScheme { FastConvolution, IteratedFfa, Hybrid };

std::string to_string(CostScheme scheme);
CostScheme parse_cost_scheme(std::string_view text);

struct SchemeCosts {
  CostScheme scheme = CostScheme::IteratedFfa;
  std::size_t levels = 1;
  Int additions = 0;
  Int delay_elements = 0;
  std::optional<Int> subfilters;  // absent for FastConvolution
  /// 3^n * (N / 2^n) when N was supplied and divisible by 2^n.
  std::optional<Int> multiplications;
  /// 2N - N/L for a single (non-iterated) level, reported separately.
  std::optional<Int> single_level_bound;
  /// Multiplications per tap, (3/2)^n, as an exact fraction.
  std::optional<Rational> multiplications_per_tap;
};

/// Largest n accepted by the formulas.
inline constexpr std::size_t kMaxCostLevels = 60;

/// Throws UsageError for n < 1 or n > kMaxCostLevels, ShapeError when N is
/// given but not divisible by 2^n.
SchemeCosts closed_form(CostScheme scheme, std::size_t levels, std::optional<std::size_t> tap_count = std::nullopt);

struct FieldMatch {
  bool additions = false;
  bool delay_elements = false;
  bool subfilters = false;
  bool all() const { return additions && delay_elements && subfilters; }
};

struct Reconciliation {
  SchemeCosts formula;
  CostReport graph;
  FieldMatch match;
};

/// Synthesizes the scheme at level n and compares formula with graph
/// counts. Mismatches are reported, not thrown. FastConvolution has no
/// graph construction and throws UsageError.
Reconciliation reconcile(CostScheme scheme, std::size_t levels);

struct TableRow {
  SchemeCosts costs;
  std::optional<Reconciliation> reconciled;
};

/// Rows grouped by scheme (FastConvolution, IteratedFfa, Hybrid), each in
/// the order of `levels`.
std::vector<TableRow> comparison_table(const std::vector<std::size_t>& levels);

/// Adds graph counts to the IteratedFfa and Hybrid rows.
void attach_reconciliation(std::vector<TableRow>& rows);

std::string render_csv(const std::vector<TableRow>& rows);
std::string render_text(const std::vector<TableRow>& rows);

/// Exact decimal expansion of (3/2)^n (always terminates).
std::string multiplications_per_tap_decimal(std::size_t levels);

}  // namespace ffa
