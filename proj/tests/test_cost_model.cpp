#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffa/cost_model.hpp"

#include <sstream>

using namespace ffa;

namespace {

Int pow_of(int base, std::size_t e) {
  Int r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

struct Pair {
  long long adds;
  long long delays;
};

void check_pair(const SchemeCosts& c, Pair want) {
  CHECK(c.additions == want.adds);
  CHECK(c.delay_elements == want.delays);
}

}  // namespace

TEST_CASE("published table values") {
  check_pair(closed_form(CostScheme::IteratedFfa, 4), {260, 40});
  check_pair(closed_form(CostScheme::IteratedFfa, 6), {2660, 364});
  check_pair(closed_form(CostScheme::IteratedFfa, 8), {25220, 3280});
  check_pair(closed_form(CostScheme::Hybrid, 4), {241, 21});
  check_pair(closed_form(CostScheme::Hybrid, 6), {2449, 153});
  check_pair(closed_form(CostScheme::Hybrid, 8), {23161, 1221});
  check_pair(closed_form(CostScheme::FastConvolution, 4), {310, 15});
  check_pair(closed_form(CostScheme::FastConvolution, 6), {3262, 63});
  check_pair(closed_form(CostScheme::FastConvolution, 8), {31270, 255});
}

TEST_CASE("single level") {
  for (CostScheme s : {CostScheme::FastConvolution, CostScheme::IteratedFfa, CostScheme::Hybrid})
    check_pair(closed_form(s, 1), {4, 1});
}

TEST_CASE("hybrid formulas agree with their fractional form") {
  for (std::size_t n = 1; n <= 12; ++n) {
    const Rational adds = Rational(11, 3) * pow_of(3, n) - Rational(7, 2) * pow_of(2, n);
    const Rational delays = Rational(pow_of(2, n) + pow_of(3, n - 1) - 1, 2);
    CHECK(denominator(adds) == 1);
    CHECK(denominator(delays) == 1);
    const SchemeCosts c = closed_form(CostScheme::Hybrid, n);
    CHECK(Rational(c.additions) == adds);
    CHECK(Rational(c.delay_elements) == delays);
    const Rational it_delays = Rational(pow_of(3, n) - 1, 2);
    CHECK(denominator(it_delays) == 1);
    CHECK(Rational(closed_form(CostScheme::IteratedFfa, n).delay_elements) == it_delays);
  }
}

TEST_CASE("ordering of the three schemes") {
  for (std::size_t n = 2; n <= 12; ++n) {
    const SchemeCosts f = closed_form(CostScheme::FastConvolution, n);
    const SchemeCosts i = closed_form(CostScheme::IteratedFfa, n);
    const SchemeCosts h = closed_form(CostScheme::Hybrid, n);
    CHECK(h.additions < i.additions);
    CHECK(i.additions < f.additions);
    CHECK(h.delay_elements < i.delay_elements);
    if (n == 2) CHECK(f.delay_elements == h.delay_elements);
    else CHECK(f.delay_elements < h.delay_elements);
  }
}

TEST_CASE("multiplication counts") {
  const SchemeCosts c = closed_form(CostScheme::IteratedFfa, 2, 16);
  CHECK(*c.multiplications == 36);
  CHECK(*c.single_level_bound == 2 * 16 - 16 / 4);
  CHECK(*c.multiplications_per_tap == Rational(9, 4));
  const SchemeCosts one = closed_form(CostScheme::Hybrid, 1, 8);
  CHECK(*one.multiplications == *one.single_level_bound);
  CHECK_THROWS_AS(closed_form(CostScheme::Hybrid, 3, 12), ShapeError);
  const SchemeCosts fc = closed_form(CostScheme::FastConvolution, 3, 16);
  CHECK_FALSE(fc.subfilters.has_value());
  CHECK_FALSE(fc.multiplications.has_value());
  CHECK(multiplications_per_tap_decimal(1) == "1.5");
  CHECK(multiplications_per_tap_decimal(3) == "3.375");
  CHECK(multiplications_per_tap_decimal(8) == "25.62890625");
}

TEST_CASE("level bounds") {
  CHECK_THROWS_AS(closed_form(CostScheme::IteratedFfa, 0), UsageError);
  CHECK_THROWS_AS(closed_form(CostScheme::Hybrid, kMaxCostLevels + 1), UsageError);
  CHECK_NOTHROW(closed_form(CostScheme::Hybrid, kMaxCostLevels));
}

TEST_CASE("reconciliation") {
  const Reconciliation it3 = reconcile(CostScheme::IteratedFfa, 3);
  CHECK(it3.match.all());
  CHECK(it3.graph.additions == 76);
  CHECK(it3.graph.delay_elements == 13);
  const Reconciliation h2 = reconcile(CostScheme::Hybrid, 2);
  CHECK(h2.match.all());
  CHECK(h2.graph.additions == 19);
  CHECK(h2.graph.delay_elements == 3);
  const Reconciliation h3 = reconcile(CostScheme::Hybrid, 3);
  CHECK(h3.match.all());
  CHECK(h3.graph.additions == 71);
  CHECK(h3.graph.delay_elements == 8);
  CHECK_THROWS_AS(reconcile(CostScheme::FastConvolution, 3), UsageError);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(reconcile(CostScheme::IteratedFfa, n).match.all());
  for (std::size_t n = 1; n <= 4; ++n) CHECK(reconcile(CostScheme::Hybrid, n).match.all());
}

TEST_CASE("comparison table") {
  const auto rows = comparison_table({4, 6, 8});
  REQUIRE(rows.size() == 9);
  const Pair want[] = {{310, 15},   {3262, 63},   {31270, 255},  {260, 40},   {2660, 364},
                       {25220, 3280}, {241, 21}, {2449, 153}, {23161, 1221}};
  const CostScheme order[] = {CostScheme::FastConvolution, CostScheme::IteratedFfa, CostScheme::Hybrid};
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(rows[i].costs.scheme == order[i / 3]);
    check_pair(rows[i].costs, want[i]);
  }
  const auto single = comparison_table({1});
  REQUIRE(single.size() == 3);
  for (const auto& r : single) check_pair(r.costs, {4, 1});
  CHECK(comparison_table({}).empty());
}

TEST_CASE("renderings") {
  auto rows = comparison_table({2});
  const std::string csv = render_csv(rows);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "scheme,n,L,additions,delays,subfilters,multiplications_per_N");
  std::getline(in, line);
  CHECK(line == "fast-convolution,2,4,22,3,,");
  std::getline(in, line);
  CHECK(line == "iterated,2,4,20,4,9,2.25");
  std::getline(in, line);
  CHECK(line == "hybrid,2,4,19,3,9,2.25");

  attach_reconciliation(rows);
  const std::string rec = render_csv(rows);
  CHECK(rec.find("hybrid,2,4,19,3,9,2.25,19,3,9,true") != std::string::npos);

  const std::string text = render_text(comparison_table({4}));
  CHECK(text.find("fast-convolution") != std::string::npos);
  CHECK(text.find("241") != std::string::npos);
  // every line has the same width
  std::istringstream tin(text);
  std::size_t width = 0;
  while (std::getline(tin, line)) {
    const std::size_t w = line.size();
    if (width == 0) width = w;
    CHECK(w == width);
  }
}

TEST_CASE("scheme names") {
  CHECK(parse_cost_scheme("hybrid") == CostScheme::Hybrid);
  CHECK(parse_cost_scheme("iterated") == CostScheme::IteratedFfa);
  CHECK(parse_cost_scheme("fast-convolution") == CostScheme::FastConvolution);
  CHECK_THROWS_AS(parse_cost_scheme("magic"), UsageError);
}
