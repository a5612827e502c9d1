#include "ffa/factorization.hpp"

#include "ffa/primitives.hpp"
#include "ffa/simulator.hpp"

namespace ffa {

namespace {

void require_multiple_of_4(const std::vector<Int>& h) {
  if (h.empty() || h.size() % 4 != 0)
    throw ShapeError("tap count " + std::to_string(h.size()) + " is not a positive multiple of 4");
}

PolyMatrix phase_column(const std::vector<Int>& h) {
  PolyMatrix col(4, 1);
  for (std::size_t k = 0; k < 4; ++k) col(k, 0) = phase_poly(h, 4, k);
  return col;
}

/// diag((P2 x P2) P4 H4)
PolyMatrix leaf_filters(const std::vector<Int>& h) {
  const auto& c = constant_matrices();
  const PolyMatrix combos = pm_kron(c.p2, c.p2) * c.p4 * phase_column(h);
  std::vector<Poly> entries;
  for (std::size_t i = 0; i < combos.rows(); ++i) entries.push_back(combos(i, 0));
  return pm_diag(entries);
}

TransferMatrix hybrid_chain(const std::vector<Int>& h, const PolyMatrix& output_combine) {
  require_multiple_of_4(h);
  const auto& c = constant_matrices();
  const PolyMatrix port_perm = PolyMatrix::permutation(c.hybrid_port_order);
  const PolyMatrix pre = pm_kron(c.p2, c.q2.transposed() * c.d24.transposed());
  const PolyMatrix post = output_combine * pm_kron(c.q2, c.p2.transposed());
  // Y4p = M X4p with Y4p = perm Y4, X4p = perm X4  =>  Y4 = perm^T M perm X4
  return port_perm.transposed() * post * leaf_filters(h) * pre * port_perm;
}

}  // namespace

TransferMatrix factorization_iterated4(const std::vector<Int>& h) {
  require_multiple_of_4(h);
  const auto& c = constant_matrices();
  const PolyMatrix chain = c.d4 * pm_kron(c.q2, PolyMatrix::identity(2)) *
                           pm_kron(PolyMatrix::identity(3), c.d24 * c.q2) * leaf_filters(h) *
                           pm_kron(c.p2, c.p2) * c.p4;
  return c.p4 * chain;  // P4 is its own inverse
}

TransferMatrix factorization_hybrid4(const std::vector<Int>& h) {
  return hybrid_chain(h, constant_matrices().d4_hybrid_consistent);
}

TransferMatrix factorization_hybrid4_as_printed(const std::vector<Int>& h) {
  return hybrid_chain(h, constant_matrices().d4_hybrid);
}

TransferMatrix transfer_of_graph(const StructureGraph& g, const std::vector<Int>& h) {
  const std::size_t L = g.parallelism();
  Simulator<Int> sim(g, h);  // validates g and divisibility
  const CostReport costs = count_costs(g);
  const std::size_t blocks = (h.size() + costs.delay_elements * L + L - 1) / L + 1;

  TransferMatrix m(L, L);
  std::vector<Int> x(blocks * L);
  for (std::size_t j = 0; j < L; ++j) {
    std::fill(x.begin(), x.end(), Int(0));
    x[j] = 1;
    const std::vector<Int> y = sim.run(x);
    for (std::size_t i = 0; i < L; ++i) {
      std::vector<Int> coeffs(blocks * L);
      for (std::size_t b = 0; b < blocks; ++b) coeffs[b * L] = y[b * L + i];
      m(i, j) = Poly(std::move(coeffs));
    }
  }
  return m;
}

}  // namespace ffa
