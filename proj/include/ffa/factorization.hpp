#pragma once

// Matrix-form checks: the 4-parallel factorizations evaluated over the
// polynomial ring, and transfer matrices extracted from graphs.

#include "ffa/numeric.hpp"
#include "ffa/poly_matrix.hpp"
#include "ffa/polyphase.hpp"
#include "ffa/structure_graph.hpp"

#include <vector>

namespace ffa {

/// P4 * D4 (Q2 x I2)(I3 x D24 Q2) diag((P2 x P2) P4 H4) (P2 x P2) P4:
/// the natural-order 4x4 map X4 -> Y4 of the iterated 4-parallel FFA.
/// Throws ShapeError unless len(h) is a positive multiple of 4.
TransferMatrix factorization_iterated4(const std::vector<Int>& h);

/// Hybrid 4-parallel map D4'(Q2 x P2^T) diag((P2 x P2) P4 H4)(P2 x Q2^T D24^T)
/// on the permuted ports X4p / Y4p, returned in natural order.
TransferMatrix factorization_hybrid4(const std::vector<Int>& h);

/// Same chain using the published hybrid output matrix verbatim.
TransferMatrix factorization_hybrid4_as_printed(const std::vector<Int>& h);

/// Impulse-probe extraction: a unit impulse on each input phase, run long
/// enough to flush every delay, gives one column of the transfer matrix.
TransferMatrix transfer_of_graph(const StructureGraph& g, const std::vector<Int>& h);

}  // namespace ffa
