#pragma once

#include "ffa/poly_matrix.hpp"
#include "ffa/structure_graph.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ffa {

enum class Orientation { Direct, Transposed };
enum class SignForm { Plus, Minus };

struct Ffa2Form {
  Orientation orientation = Orientation::Direct;
  SignForm sign_form = SignForm::Plus;

  friend bool operator==(const Ffa2Form&, const Ffa2Form&) = default;
};

inline constexpr Ffa2Form kDirectPlus{Orientation::Direct, SignForm::Plus};
inline constexpr Ffa2Form kDirectMinus{Orientation::Direct, SignForm::Minus};
inline constexpr Ffa2Form kTransposedPlus{Orientation::Transposed, SignForm::Plus};
inline constexpr Ffa2Form kTransposedMinus{Orientation::Transposed, SignForm::Minus};
inline constexpr Ffa2Form kAllForms[] = {kDirectPlus, kDirectMinus, kTransposedPlus, kTransposedMinus};

/// "direct-plus", "transposed-minus", ...
std::string to_string(Ffa2Form form);
/// Inverse of to_string; throws UsageError.
Ffa2Form parse_form(std::string_view text);

/// 2-parallel fast FIR block: three subfilters (H0, H0+H1, H1 for the plus
/// form, H0-H1 in the middle for the minus form), four adds, one delay.
/// Transposed forms are the transpose of the matching direct form.
StructureGraph build_ffa2(Ffa2Form form, std::size_t tap_count = 0);

/// Constant matrices of the 2- and 4-parallel matrix factorizations.
/// Delay entries are serial-rate (z^{-4} is one block at L = 4).
struct ConstantMatrixSet {
  PolyMatrix p2;        // [[1,0],[1,1],[0,1]]
  PolyMatrix q2;        // [[1,0,0],[-1,1,-1],[0,0,1]]
  PolyMatrix p2_minus;  // [[1,0],[1,-1],[0,1]]
  PolyMatrix q2_minus;  // [[1,0,0],[1,-1,1],[0,0,1]]
  PolyMatrix p4;        // swaps the middle two of four
  PolyMatrix d4;        // iterated 4-parallel output combine
  PolyMatrix d24;       // [[1,0,z^-4],[0,1,0]]
  PolyMatrix d22;       // [[1,0,z^-2],[0,1,0]]
  /// Hybrid output combine exactly as published. Its last two columns are
  /// swapped relative to the operand order of (Q2 kron P2^T); see
  /// d4_hybrid_consistent.
  PolyMatrix d4_hybrid;
  /// The published matrix with its last two columns swapped; this is the
  /// version for which the hybrid factorization reproduces the filter.
  PolyMatrix d4_hybrid_consistent;
  /// X4p = perm X4 and Y4p = perm Y4 for the hybrid factorization.
  std::vector<std::size_t> hybrid_port_order;  // {2, 0, 3, 1}
};

const ConstantMatrixSet& constant_matrices();

}  // namespace ffa
