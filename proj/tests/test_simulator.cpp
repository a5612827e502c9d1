#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffa/simulator.hpp"
#include "ffa/synthesis.hpp"
#include "test_support.hpp"

#include <cstdint>

using namespace ffa;
using ffa::testing::ints;
using ffa::testing::iota_ints;
using ffa::testing::random_ints;

namespace {

std::vector<Int> prefix(const std::vector<Int>& v, std::size_t n) { return {v.begin(), v.begin() + n}; }

std::vector<Int> oracle(const std::vector<Int>& h, const std::vector<Int>& x) {
  auto y = convolve_serial(h, x);
  y.resize(x.size());
  return y;
}

}  // namespace

TEST_CASE("impulse through the 4-parallel iterated structure") {
  std::vector<Int> x(16, Int(0));
  x[0] = 1;
  CHECK(prefix(simulate(synthesize_iterated(2, kDirectPlus), iota_ints(8), x), 8) == iota_ints(8));
}

TEST_CASE("two-tap moving sum") {
  CHECK(simulate(build_ffa2(kDirectPlus), ints({1, 1}), ints({1, 2, 3, 4})) == ints({1, 3, 5, 7}));
}

TEST_CASE("8-parallel hybrid against the oracle") {
  std::mt19937_64 rng(16);
  const std::vector<Int> h = random_ints(rng, 16);
  const std::vector<Int> x = random_ints(rng, 128);
  CHECK(simulate(synthesize_hybrid(3), h, x) == oracle(h, x));
}

TEST_CASE("partial final block is zero padded and truncated") {
  std::mt19937_64 rng(5);
  const std::vector<Int> h = random_ints(rng, 8);
  const std::vector<Int> x = random_ints(rng, 13);
  const auto y = simulate(synthesize_hybrid(2), h, x);
  CHECK(y.size() == 13);
  CHECK(y == oracle(h, x));
  CHECK(simulate(synthesize_hybrid(2), h, std::vector<Int>{}).empty());
}

TEST_CASE("verify_equivalence passes every structure") {
  for (const auto& [name, g] : testing::structures_up_to(4)) {
    CAPTURE(name);
    std::mt19937_64 rng(g.parallelism());
    const auto report = verify_equivalence(g, random_ints(rng, 4 * g.parallelism()), 100, 42);
    CHECK(report.pass);
    CHECK(report.max_abs_diff == 0.0);
    CHECK(report.trials == 100);
    CHECK(report.seed == 42);
    CHECK(report.input_len == 16 * g.parallelism());
  }
}

TEST_CASE("a sign-flipped edge is caught") {
  std::mt19937_64 rng(3);
  const std::vector<Int> h = random_ints(rng, 16, 1, 8);
  const StructureGraph g = synthesize_hybrid(2);
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    StructureGraph m = g;
    m.set_edge_sign(e, -m.edges()[e].sign);
    CAPTURE(e);
    const auto report = verify_equivalence(m, h, 10, 1);
    CHECK_FALSE(report.pass);
    CHECK(report.max_abs_diff > 0.0);
  }
}

TEST_CASE("zero input gives zero output") {
  std::mt19937_64 rng(4);
  const std::vector<Int> h = random_ints(rng, 32);
  for (const auto& [name, g] : testing::structures_at(3)) {
    const auto y = simulate(g, h, std::vector<Int>(64, Int(0)));
    for (const auto& v : y) CHECK(v == 0);
  }
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(21);
  const StructureGraph g = synthesize_hybrid(3);
  for (int t = 0; t < 20; ++t) {
    const std::vector<Int> h = random_ints(rng, 32);
    const std::vector<Int> x1 = random_ints(rng, 64);
    const std::vector<Int> x2 = random_ints(rng, 64);
    const Int a = static_cast<int>(rng() % 7) - 3, b = static_cast<int>(rng() % 7) - 3;
    std::vector<Int> mix(64);
    for (std::size_t i = 0; i < 64; ++i) mix[i] = a * x1[i] + b * x2[i];
    const auto y1 = simulate(g, h, x1), y2 = simulate(g, h, x2), ym = simulate(g, h, mix);
    for (std::size_t i = 0; i < 64; ++i) REQUIRE(ym[i] == a * y1[i] + b * y2[i]);
  }
}

TEST_CASE("block shift invariance") {
  std::mt19937_64 rng(22);
  for (const auto& [name, g] : testing::structures_at(2)) {
    const std::size_t L = g.parallelism();
    const std::vector<Int> h = random_ints(rng, 2 * L);
    const std::vector<Int> x = random_ints(rng, 8 * L);
    std::vector<Int> shifted(L, Int(0));
    shifted.insert(shifted.end(), x.begin(), x.end());
    const auto y = simulate(g, h, x);
    const auto ys = simulate(g, h, shifted);
    for (std::size_t i = 0; i < L; ++i) CHECK(ys[i] == 0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(ys[i + L] == y[i]);
  }
}

TEST_CASE("runs are deterministic and reset state") {
  std::mt19937_64 rng(23);
  const std::vector<Int> h = random_ints(rng, 16);
  const std::vector<Int> x = random_ints(rng, 40);
  Simulator<Int> sim(synthesize_iterated(2, kTransposedMinus), h);
  const auto first = sim.run(x);
  CHECK(sim.run(x) == first);
  CHECK(simulate(synthesize_iterated(2, kTransposedMinus), h, x) == first);
}

TEST_CASE("step-wise execution matches run") {
  std::mt19937_64 rng(24);
  const std::vector<Int> h = random_ints(rng, 8);
  const std::vector<Int> x = random_ints(rng, 16);
  Simulator<Int> sim(synthesize_hybrid(2), h);
  std::vector<Int> y(16);
  for (std::size_t b = 0; b < 4; ++b)
    sim.step(std::span<const Int>(x).subspan(4 * b, 4), std::span<Int>(y).subspan(4 * b, 4));
  CHECK(y == oracle(h, x));
}

TEST_CASE("rational, floating and 64-bit arithmetic") {
  const StructureGraph g = synthesize_hybrid(2);
  std::vector<Rational> hr;
  for (int i = 1; i <= 8; ++i) hr.emplace_back(1, i);
  const auto rep = verify_equivalence(g, hr, 10, 5);
  CHECK(rep.pass);
  std::vector<double> hd = {0.5, -0.25, 1e-3, 3.0, 7.5, -2.0, 0.125, 1.0};
  CHECK(verify_equivalence(g, hd, 10, 5).pass);
  std::vector<std::int64_t> hi = {3, -1, 4, 1, -5, 9, 2, -6};
  CHECK(verify_equivalence(g, hi, 10, 5).pass);
}

TEST_CASE("precondition errors") {
  CHECK_THROWS_AS(Simulator<Int>(synthesize_hybrid(2), ints({1, 2, 3, 4, 5, 6})), ShapeError);
  CHECK_THROWS_AS(Simulator<Int>(synthesize_hybrid(2), std::vector<Int>{}), ShapeError);
  CHECK_THROWS_AS(Simulator<Int>(synthesize_hybrid(2, 8), iota_ints(16)), ShapeError);
  StructureGraph broken(1, 0, "broken");
  broken.add_node(NodeKind::Input, 0);
  CHECK_THROWS_AS(Simulator<Int>(broken, ints({1})), std::invalid_argument);
}
