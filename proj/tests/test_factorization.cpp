#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffa/factorization.hpp"
#include "ffa/synthesis.hpp"
#include "test_support.hpp"

using namespace ffa;
using ffa::testing::random_ints;

TEST_CASE("iterated 4-parallel factorization equals the pseudo-circulant") {
  std::mt19937_64 rng(8);
  for (std::size_t len : {8u, 16u})
    for (int t = 0; t < 50; ++t) {
      const std::vector<Int> h = random_ints(rng, len);
      REQUIRE(factorization_iterated4(h) == pseudocirculant(h, 4));
    }
}

TEST_CASE("hybrid 4-parallel factorization equals the pseudo-circulant") {
  std::mt19937_64 rng(16);
  for (std::size_t len : {8u, 16u})
    for (int t = 0; t < 50; ++t) {
      const std::vector<Int> h = random_ints(rng, len);
      REQUIRE(factorization_hybrid4(h) == pseudocirculant(h, 4));
      REQUIRE(factorization_hybrid4(h) == factorization_iterated4(h));
    }
}

TEST_CASE("the output matrix as published does not reproduce the filter") {
  std::mt19937_64 rng(17);
  const std::vector<Int> h = random_ints(rng, 8, 1, 8);
  CHECK_FALSE(factorization_hybrid4_as_printed(h) == pseudocirculant(h, 4));
}

TEST_CASE("an impulse filter gives the blocked identity") {
  std::vector<Int> h(8, Int(0));
  h[0] = 1;
  CHECK(factorization_iterated4(h) == PolyMatrix::identity(4));
  CHECK(factorization_hybrid4(h) == PolyMatrix::identity(4));
}

TEST_CASE("all-ones filter with delays dropped") {
  const std::vector<Int> h(8, Int(1));
  const PolyMatrix lower = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 0}, {1, 1, 1, 1}};
  CHECK(factorization_iterated4(h).at_zero_delay() == lower);
  CHECK(factorization_hybrid4(h).at_zero_delay() == lower);
}

TEST_CASE("tap count must be a multiple of four") {
  CHECK_THROWS_AS(factorization_iterated4(testing::iota_ints(6)), ShapeError);
  CHECK_THROWS_AS(factorization_hybrid4(testing::iota_ints(10)), ShapeError);
  CHECK_THROWS_AS(factorization_iterated4({}), ShapeError);
}

TEST_CASE("graph transfer matrices") {
  std::mt19937_64 rng(5);
  SUBCASE("primitive") {
    const std::vector<Int> h = random_ints(rng, 6);
    CHECK(transfer_of_graph(build_ffa2(kDirectPlus), h) == pseudocirculant(h, 2));
  }
  SUBCASE("hybrid n=2") {
    const std::vector<Int> h = random_ints(rng, 16);
    CHECK(transfer_of_graph(synthesize_hybrid(2), h) == pseudocirculant(h, 4));
  }
  SUBCASE("every structure up to n=3") {
    for (const auto& [name, g] : testing::structures_up_to(3)) {
      CAPTURE(name);
      for (int t = 0; t < 3; ++t) {
        const std::vector<Int> h = random_ints(rng, g.parallelism() * (1 + rng() % 3));
        CHECK(transfer_of_graph(g, h) == pseudocirculant(h, g.parallelism()));
      }
    }
  }
  SUBCASE("divisibility") {
    CHECK_THROWS_AS(transfer_of_graph(synthesize_hybrid(2), random_ints(rng, 6)), ShapeError);
  }
}
