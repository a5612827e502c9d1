#pragma once

// Composition of 2-parallel FFA blocks into 2^n-parallel structures.

#include "ffa/numeric.hpp"
#include "ffa/polyphase.hpp"
#include "ffa/primitives.hpp"
#include "ffa/structure_graph.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ffa {

enum class SchemeKind { IteratedFfa, Hybrid, NaiveBlocked };

struct Scheme {
  SchemeKind kind = SchemeKind::IteratedFfa;
  Ffa2Form form = kDirectPlus;  // IteratedFfa only
  std::size_t levels = 1;

  std::size_t parallelism() const { return std::size_t{1} << levels; }
};

std::string to_string(const Scheme& scheme);

/// Bit-reversal permutation of 0..2^n-1: position p of the recursively
/// even/odd-split order holds natural phase order[p]. For n = 2 this is
/// {0, 2, 1, 3}.
std::vector<std::size_t> nesting_order(std::size_t levels);

/// Iterated FFA: each of the three subfilter slots of a 2-parallel block is
/// itself a 2-parallel block on half-width buses, n levels deep. Direct
/// forms are built level by level; transposed forms are the transpose of
/// the matching direct structure. Throws UsageError for n < 1 and
/// ShapeError when tap_count is non-zero and not divisible by 2^n.
StructureGraph synthesize_iterated(std::size_t levels, Ffa2Form form, std::size_t tap_count = 0);

/// Hybrid structure: direct-plus blocks on the outer bus levels and a
/// transposed-plus block at the innermost (2-sample) level, with the
/// transposed input network applied once per physical input pair
/// (X_r, X_{r+L/2}) ahead of the direct spreading adds. n = 1 yields the
/// direct-plus primitive.
StructureGraph synthesize_hybrid(std::size_t levels, std::size_t tap_count = 0);

/// Same transfer function as synthesize_hybrid but with the transposed
/// input network instantiated separately inside every inner block (no
/// input-side sharing). Input to share_substructures.
StructureGraph synthesize_hybrid_unshared(std::size_t levels, std::size_t tap_count = 0);

/// Direct pseudo-circulant realization: L^2 unit subfilters, L(L-1) adds,
/// L-1 delays. levels = 0 gives a single pass-through subfilter.
StructureGraph synthesize_naive(std::size_t levels, std::size_t tap_count = 0);

StructureGraph synthesize(const Scheme& scheme, std::size_t tap_count = 0);

enum class ShareRegion { InputSide, OutputSide, Both };

ShareRegion parse_share_region(std::string_view text);

/// Behavior-preserving adder/delay sharing over the linear networks on
/// either side of the subfilters:
///  - nodes computing the same signed, delay-annotated combination of
///    sources are merged;
///  - an Add is re-expressed as the sum/difference of two existing nodes
///    when that lets other logic die;
///  - (z^-L a +- b) +- (z^-L c +- d) is rewritten as
///    z^-L (a +- c) +- (b +- d) when that lowers the objective.
/// Rewrites are greedy and only accepted on strict improvement of the
/// objective: (additions, delays) for InputSide and Both, (delays,
/// additions) for OutputSide. Re-expression candidates are visited widest
/// combination first, ties in ascending node id.
StructureGraph share_substructures(const StructureGraph& g, ShareRegion region);

/// Instantiated subfilter taps: sum_j combo[j] * phase_j(h) with L = 2^n
/// phases in natural order.
template <class T>
std::vector<T> subfilter_taps(const SubfilterSpec& spec, const std::vector<T>& h, std::size_t levels) {
  const std::size_t L = std::size_t{1} << levels;
  if (h.empty() || h.size() % L != 0)
    throw ShapeError("tap count " + std::to_string(h.size()) + " is not a positive multiple of " + std::to_string(L));
  if (spec.combo.size() != L) throw std::invalid_argument("subfilter_taps: combination length != L");
  const auto phases = polyphase_decompose(h, L);
  std::vector<T> taps(h.size() / L, T(0));
  for (std::size_t j = 0; j < L; ++j) {
    if (spec.combo[j] == 0) continue;
    for (std::size_t k = 0; k < taps.size(); ++k) taps[k] += T(spec.combo[j]) * phases.phases[j][k];
  }
  return taps;
}

}  // namespace ffa
