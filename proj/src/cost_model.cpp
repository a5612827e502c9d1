#include "ffa/cost_model.hpp"

#include "ffa/synthesis.hpp"

#include <algorithm>
#include <sstream>

namespace ffa {

namespace {

Int pow_int(unsigned base, std::size_t e) {
  Int r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

std::string str(const Int& v) { return v.str(); }

}  // namespace

std::string to_string(CostScheme scheme) {
  switch (scheme) {
    case CostScheme::FastConvolution: return "fast-convolution";
    case CostScheme::IteratedFfa: return "iterated";
    case CostScheme::Hybrid: return "hybrid";
  }
  return "?";
}

CostScheme parse_cost_scheme(std::string_view text) {
  if (text == "fast-convolution" || text == "fastconv") return CostScheme::FastConvolution;
  if (text == "iterated") return CostScheme::IteratedFfa;
  if (text == "hybrid") return CostScheme::Hybrid;
  throw UsageError("unknown cost scheme '" + std::string(text) + "'");
}

SchemeCosts closed_form(CostScheme scheme, std::size_t levels, std::optional<std::size_t> tap_count) {
  if (levels < 1 || levels > kMaxCostLevels)
    throw UsageError("n must be in 1.." + std::to_string(kMaxCostLevels) + ", got " + std::to_string(levels));
  const Int p3 = pow_int(3, levels);
  const Int p2 = pow_int(2, levels);
  const Int p3m = pow_int(3, levels - 1);
  const Int p2m = pow_int(2, levels - 1);

  SchemeCosts c;
  c.scheme = scheme;
  c.levels = levels;
  switch (scheme) {
    case CostScheme::IteratedFfa:
      c.additions = 4 * (p3 - p2);
      c.delay_elements = (p3 - 1) / 2;
      break;
    case CostScheme::Hybrid:
      // (11/3) 3^n - (7/2) 2^n and (2^n + 3^(n-1) - 1) / 2
      c.additions = 11 * p3m - 7 * p2m;
      c.delay_elements = (p2 + p3m - 1) / 2;
      break;
    case CostScheme::FastConvolution:
      c.additions = 5 * p3 - 6 * p2 + 1;
      c.delay_elements = p2 - 1;
      return c;
  }
  c.subfilters = p3;
  c.multiplications_per_tap = Rational(p3, p2);
  if (tap_count) {
    const std::size_t L = std::size_t{1} << std::min<std::size_t>(levels, 63);
    if (levels >= 63 || *tap_count == 0 || *tap_count % L != 0)
      throw ShapeError("tap count " + std::to_string(*tap_count) + " is not a positive multiple of 2^" +
                       std::to_string(levels));
    const Int N = *tap_count;
    c.multiplications = p3 * (N / p2);
    c.single_level_bound = 2 * N - N / p2;
  }
  return c;
}

Reconciliation reconcile(CostScheme scheme, std::size_t levels) {
  Reconciliation r;
  r.formula = closed_form(scheme, levels);
  switch (scheme) {
    case CostScheme::FastConvolution:
      throw UsageError("fast-convolution has no graph construction to reconcile against");
    case CostScheme::IteratedFfa:
      r.graph = count_costs(synthesize_iterated(levels, kDirectPlus));
      break;
    case CostScheme::Hybrid:
      r.graph = count_costs(synthesize_hybrid(levels));
      break;
  }
  r.match.additions = r.formula.additions == r.graph.additions;
  r.match.delay_elements = r.formula.delay_elements == r.graph.delay_elements;
  r.match.subfilters = r.formula.subfilters && *r.formula.subfilters == r.graph.subfilters;
  return r;
}

std::vector<TableRow> comparison_table(const std::vector<std::size_t>& levels) {
  std::vector<TableRow> rows;
  for (CostScheme s : {CostScheme::FastConvolution, CostScheme::IteratedFfa, CostScheme::Hybrid})
    for (std::size_t n : levels) rows.push_back({closed_form(s, n), std::nullopt});
  return rows;
}

void attach_reconciliation(std::vector<TableRow>& rows) {
  for (TableRow& row : rows)
    if (row.costs.scheme != CostScheme::FastConvolution) row.reconciled = reconcile(row.costs.scheme, row.costs.levels);
}

std::string multiplications_per_tap_decimal(std::size_t levels) {
  // (3/2)^n = 3^n * 5^n / 10^n
  const std::string digits = str(pow_int(15, levels));
  if (levels == 0) return digits;
  std::string padded = digits.size() <= levels ? std::string(levels + 1 - digits.size(), '0') + digits : digits;
  const std::size_t point = padded.size() - levels;
  std::string out = padded.substr(0, point) + "." + padded.substr(point);
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

std::string render_csv(const std::vector<TableRow>& rows) {
  const bool with_graph = std::any_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.reconciled; });
  std::ostringstream os;
  os << "scheme,n,L,additions,delays,subfilters,multiplications_per_N";
  if (with_graph) os << ",graph_additions,graph_delays,graph_subfilters,match";
  os << "\n";
  for (const TableRow& r : rows) {
    const SchemeCosts& c = r.costs;
    os << to_string(c.scheme) << ',' << c.levels << ',' << str(pow_int(2, c.levels)) << ',' << str(c.additions) << ','
       << str(c.delay_elements) << ',' << (c.subfilters ? str(*c.subfilters) : "") << ','
       << (c.multiplications_per_tap ? multiplications_per_tap_decimal(c.levels) : "");
    if (with_graph) {
      if (r.reconciled) {
        const CostReport& g = r.reconciled->graph;
        os << ',' << g.additions << ',' << g.delay_elements << ',' << g.subfilters << ','
           << (r.reconciled->match.all() ? "true" : "false");
      } else {
        os << ",,,,";
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string render_text(const std::vector<TableRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"scheme", "n", "L", "additions", "delays", "subfilters", "mults/N"};
  const bool with_graph = std::any_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.reconciled; });
  if (with_graph) header.insert(header.end(), {"graph adds", "graph delays", "graph subfilters", "match"});
  cells.push_back(header);
  for (const TableRow& r : rows) {
    const SchemeCosts& c = r.costs;
    std::vector<std::string> line = {to_string(c.scheme),
                                     std::to_string(c.levels),
                                     str(pow_int(2, c.levels)),
                                     str(c.additions),
                                     str(c.delay_elements),
                                     c.subfilters ? str(*c.subfilters) : "-",
                                     c.multiplications_per_tap ? multiplications_per_tap_decimal(c.levels) : "-"};
    if (with_graph) {
      if (r.reconciled) {
        const CostReport& g = r.reconciled->graph;
        line.insert(line.end(), {std::to_string(g.additions), std::to_string(g.delay_elements),
                                 std::to_string(g.subfilters), r.reconciled->match.all() ? "yes" : "NO"});
      } else {
        line.insert(line.end(), {"-", "-", "-", "-"});
      }
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::ostringstream os;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i == 0) os << line[i] << std::string(width[i] - line[i].size(), ' ');
      else os << "  " << std::string(width[i] - line[i].size(), ' ') << line[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace ffa
