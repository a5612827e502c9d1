// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "ffa/cli.hpp"
#include "ffa/cost_model.hpp"
#include "ffa/factorization.hpp"
#include "ffa/polyphase.hpp"
#include "ffa/primitives.hpp"
#include "ffa/simulator.hpp"
#include "ffa/synthesis.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ffa;
using ffa::testing::random_ints;

namespace {

// Runtime budgets in seconds.
constexpr double kTableBudget = 1.0;
constexpr double kReconcileBudget = 10.0;
constexpr double kFunctionalBudget = 60.0;
constexpr double kMatrixBudget = 10.0;

constexpr std::size_t kFunctionalTrials = 100;
constexpr std::size_t kFunctionalMaxLevels = 5;
constexpr std::size_t kFactorizationSamples = 50;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (out_.pass) out_.detail = what;
    out_.pass = false;
  }
  void note(const std::string& text) { notes_.push_back(text); }
  Outcome outcome() const {
    Outcome o = out_;
    if (o.pass)
      for (const auto& n : notes_) o.detail += (o.detail.empty() ? "" : "; ") + n;
    return o;
  }

 private:
  Outcome out_;
  std::vector<std::string> notes_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

void check_budget(Checker& c, double elapsed, double budget) {
  c.expect(elapsed < budget, "took " + fmt_seconds(elapsed) + ", budget " + fmt_seconds(budget));
  c.note(fmt_seconds(elapsed));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

std::string counts(const CostReport& c) {
  return std::to_string(c.additions) + "/" + std::to_string(c.delay_elements);
}

std::pair<std::size_t, std::size_t> delay_sides(const StructureGraph& g) {
  std::vector<bool> after(g.nodes().size(), false);
  for (NodeId v : topological_order(g)) {
    if (g.node(v).kind == NodeKind::Subfilter) after[v] = true;
    for (std::size_t ei : g.inbound(v))
      if (after[g.edges()[ei].from]) after[v] = true;
  }
  std::size_t in = 0, out = 0;
  for (const Node& n : g.nodes())
    if (n.kind == NodeKind::Delay) (after[n.id] ? out : in) += n.cycles;
  return {in, out};
}

Outcome table_reproduction() {
  Checker c;
  const auto start = Clock::now();
  std::ostringstream out, err;
  const int code = run_cli({"cost", "-n", "4,6,8", "--csv"}, out, err);
  const double elapsed = seconds_since(start);
  c.expect(code == kExitOk, "cost exited with " + std::to_string(code));

  const std::vector<std::vector<std::string>> want = {
      {"fast-convolution", "4", "310", "15"},  {"fast-convolution", "6", "3262", "63"},
      {"fast-convolution", "8", "31270", "255"}, {"iterated", "4", "260", "40"},
      {"iterated", "6", "2660", "364"},        {"iterated", "8", "25220", "3280"},
      {"hybrid", "4", "241", "21"},            {"hybrid", "6", "2449", "153"},
      {"hybrid", "8", "23161", "1221"}};
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  std::size_t row = 0;
  while (std::getline(lines, line)) {
    const auto f = split(line, ',');
    if (row < want.size() && f.size() >= 5) {
      const std::vector<std::string> got = {f[0], f[1], f[3], f[4]};
      c.expect(got == want[row], "row " + std::to_string(row) + " is '" + line + "'");
    }
    ++row;
  }
  c.expect(row == want.size(), "expected 9 rows, got " + std::to_string(row));
  check_budget(c, elapsed, kTableBudget);
  return c.outcome();
}

Outcome stated_counts() {
  Checker c;
  auto expect_counts = [&](const std::string& name, const StructureGraph& g, std::size_t adds, std::size_t delays) {
    const CostReport r = count_costs(g);
    c.expect(r.additions == adds && r.delay_elements == delays,
             name + " has " + counts(r) + ", want " + std::to_string(adds) + "/" + std::to_string(delays));
  };
  expect_counts("iterated n=2", synthesize_iterated(2, kDirectPlus), 20, 4);
  expect_counts("iterated n=3", synthesize_iterated(3, kDirectPlus), 76, 13);
  expect_counts("hybrid n=2", synthesize_hybrid(2), 19, 3);
  expect_counts("hybrid n=3", synthesize_hybrid(3), 71, 8);
  for (const Ffa2Form& f : kAllForms) {
    const CostReport r = count_costs(build_ffa2(f));
    c.expect(r.additions == 4 && r.delay_elements == 1 && r.subfilters == 3,
             to_string(f) + " primitive has " + counts(r) + " with " + std::to_string(r.subfilters) + " subfilters");
  }
  return c.outcome();
}

Outcome reconciliation() {
  Checker c;
  const auto start = Clock::now();
  auto check = [&](CostScheme scheme, std::size_t n) {
    const Reconciliation r = reconcile(scheme, n);
    c.expect(r.match.all(), to_string(scheme) + " n=" + std::to_string(n) + " graph " + counts(r.graph) +
                                " differs from the closed form");
  };
  for (std::size_t n = 1; n <= 6; ++n) check(CostScheme::IteratedFfa, n);
  for (std::size_t n = 1; n <= 4; ++n) check(CostScheme::Hybrid, n);
  check_budget(c, seconds_since(start), kReconcileBudget);
  return c.outcome();
}

Outcome functional_equivalence() {
  Checker c;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  std::size_t structures = 0;
  for (const auto& [name, g] : testing::structures_up_to(kFunctionalMaxLevels)) {
    const std::size_t L = g.parallelism();
    const std::vector<Int> h = random_ints(rng, 4 * L);
    const EquivalenceReport r = verify_equivalence<Int>(g, h, kFunctionalTrials, rng(), 16 * L);
    c.expect(r.pass, name + " differs from serial convolution");
    worst = std::max(worst, r.max_abs_diff);
    ++structures;
  }
  c.expect(worst == 0.0, "max abs diff " + std::to_string(worst));
  c.note(std::to_string(structures) + " structures x " + std::to_string(kFunctionalTrials) + " trials");
  check_budget(c, seconds_since(start), kFunctionalBudget);
  return c.outcome();
}

Outcome matrix_identities() {
  Checker c;
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  for (std::size_t i = 0; i < kFactorizationSamples; ++i) {
    const std::vector<Int> h = random_ints(rng, i % 2 == 0 ? 8 : 16);
    const TransferMatrix want = pseudocirculant(h, 4);
    c.expect(factorization_iterated4(h) == want, "iterated factorization, sample " + std::to_string(i));
    c.expect(factorization_hybrid4(h) == want, "hybrid factorization, sample " + std::to_string(i));
  }
  for (const auto& [name, g] : testing::structures_up_to(3)) {
    const std::vector<Int> h = random_ints(rng, 4 * g.parallelism());
    c.expect(transfer_of_graph(g, h) == pseudocirculant(h, g.parallelism()), name + " transfer matrix");
  }
  check_budget(c, seconds_since(start), kMatrixBudget);
  return c.outcome();
}

Outcome transposition() {
  Checker c;
  std::mt19937_64 rng(5);
  std::vector<testing::NamedGraph> all;
  for (const Ffa2Form& f : kAllForms) all.push_back({"primitive " + to_string(f), build_ffa2(f)});
  for (auto& g : testing::structures_up_to(3)) all.push_back(std::move(g));
  for (const auto& [name, g] : all) {
    const StructureGraph t = transpose_graph(g);
    c.expect(isomorphic(transpose_graph(t), g), name + ": double transpose is not isomorphic");
    c.expect(count_costs(t) == count_costs(g), name + ": transposition changed the costs");
    const std::vector<Int> h = random_ints(rng, 4 * g.parallelism());
    const std::vector<Int> x = random_ints(rng, 16 * g.parallelism());
    c.expect(simulate(t, h, x) == simulate(g, h, x), name + ": transposed output differs");
  }
  c.note(std::to_string(all.size()) + " graphs");
  return c.outcome();
}

Outcome delay_distribution() {
  Checker c;
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto [in, out] = delay_sides(synthesize_hybrid(n));
    c.expect(in > 0 && out > 0, "hybrid n=" + std::to_string(n) + " has " + std::to_string(in) + " input-side and " +
                                    std::to_string(out) + " output-side delays");
    for (const Ffa2Form& f : {kDirectPlus, kDirectMinus}) {
      const auto [iin, iout] = delay_sides(synthesize_iterated(n, f));
      c.expect(iin == 0 && iout > 0, "iterated " + to_string(f) + " n=" + std::to_string(n) + " has input-side delays");
    }
  }
  return c.outcome();
}

Outcome monotonicity() {
  Checker c;
  for (std::size_t n = 2; n <= 12; ++n) {
    const Int h = closed_form(CostScheme::Hybrid, n).additions;
    const Int i = closed_form(CostScheme::IteratedFfa, n).additions;
    const Int f = closed_form(CostScheme::FastConvolution, n).additions;
    c.expect(h < i && i < f, "ordering fails at n=" + std::to_string(n));
  }
  return c.outcome();
}

Outcome sharing_soundness() {
  Checker c;
  std::mt19937_64 rng(9);
  for (const auto& [name, g] : testing::structures_up_to(3)) {
    const std::size_t L = g.parallelism();
    for (ShareRegion region : {ShareRegion::InputSide, ShareRegion::OutputSide, ShareRegion::Both}) {
      const StructureGraph s = share_substructures(g, region);
      const std::vector<Int> h = random_ints(rng, 4 * L);
      const std::vector<Int> x = random_ints(rng, 16 * L);
      c.expect(simulate(s, h, x) == simulate(g, h, x), name + ": sharing changed the output");
      c.expect(transfer_of_graph(s, h) == transfer_of_graph(g, h), name + ": sharing changed the transfer matrix");
      c.expect(isomorphic(share_substructures(s, region), s), name + ": sharing is not idempotent");
    }
  }
  const CostReport r = count_costs(share_substructures(synthesize_hybrid(3), ShareRegion::OutputSide));
  std::string note = "hybrid n=3 output-side " + counts(r) + " vs target 73/7 (not gating)";
  if (r.additions != 73 || r.delay_elements != 7) note += ", differs";
  c.note(note);
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 table reproduction", table_reproduction},
      {"2 stated structure counts", stated_counts},
      {"3 formula-graph reconciliation", reconciliation},
      {"4 functional equivalence", functional_equivalence},
      {"5 matrix identities", matrix_identities},
      {"6 transposition properties", transposition},
      {"7 delay distribution", delay_distribution},
      {"8 addition ordering", monotonicity},
      {"9 sharing soundness", sharing_soundness},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << (o.detail.empty() ? "" : " (" + o.detail + ")") << std::endl;
  }
  return all ? 0 : 1;
}
