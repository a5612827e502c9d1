#include "ffa/primitives.hpp"

#include "ffa/numeric.hpp"

namespace ffa {

std::string to_string(Ffa2Form form) {
  std::string s = form.orientation == Orientation::Direct ? "direct" : "transposed";
  return s + (form.sign_form == SignForm::Plus ? "-plus" : "-minus");
}

Ffa2Form parse_form(std::string_view text) {
  for (const Ffa2Form& f : kAllForms)
    if (to_string(f) == text) return f;
  throw UsageError("unknown FFA form '" + std::string(text) +
                   "' (expected direct-plus, direct-minus, transposed-plus or transposed-minus)");
}

StructureGraph build_ffa2(Ffa2Form form, std::size_t tap_count) {
  if (tap_count % 2 != 0) throw ShapeError("build_ffa2: tap count " + std::to_string(tap_count) + " is odd");
  if (form.orientation == Orientation::Transposed) {
    StructureGraph t = transpose_graph(build_ffa2({Orientation::Direct, form.sign_form}, tap_count));
    t.set_scheme("iterated-" + to_string(form));
    return t;
  }
  const bool plus = form.sign_form == SignForm::Plus;
  const std::size_t tap_len = tap_count / 2;
  StructureGraph g(2, 1, "iterated-" + to_string(form));
  const Signal x0 = g.input(0);
  const Signal x1 = g.input(1);
  const Signal mid_in = g.add(x0, plus ? x1 : x1.negated());
  const Signal s0 = g.subfilter(x0, {{1, 0}, tap_len});
  const Signal s1 = g.subfilter(mid_in, {{1, plus ? 1 : -1}, tap_len});
  const Signal s2 = g.subfilter(x1, {{0, 1}, tap_len});
  // Y0 = H0 X0 + z^-2 H1 X1
  g.output(0, g.add(s0, g.delay(s2)));
  // plus:  Y1 = (H0+H1)(X0+X1) - H0 X0 - H1 X1
  // minus: Y1 = H0 X0 + H1 X1 - (H0-H1)(X0-X1)
  if (plus) g.output(1, g.add(g.add(s1, s0.negated()), s2.negated()));
  else g.output(1, g.add(g.add(s0, s2), s1.negated()));
  return canonical_form(g);
}

const ConstantMatrixSet& constant_matrices() {
  static const ConstantMatrixSet set = [] {
    const Poly z4 = Poly::monomial(1, 4);
    const Poly z2 = Poly::monomial(1, 2);
    ConstantMatrixSet s;
    s.p2 = {{1, 0}, {1, 1}, {0, 1}};
    s.q2 = {{1, 0, 0}, {-1, 1, -1}, {0, 0, 1}};
    s.p2_minus = {{1, 0}, {1, -1}, {0, 1}};
    s.q2_minus = {{1, 0, 0}, {1, -1, 1}, {0, 0, 1}};
    s.p4 = PolyMatrix::permutation({0, 2, 1, 3});
    s.d4 = {{1, 0, 0, 0, 0, z4}, {0, 1, 0, 0, 1, 0}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}};
    s.d24 = {{1, 0, z4}, {0, 1, 0}};
    s.d22 = {{1, 0, z2}, {0, 1, 0}};
    s.d4_hybrid = {{1, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 0, z4}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}};
    s.d4_hybrid_consistent = {{1, 0, 0, 0, 0, 1}, {0, 1, 0, 0, z4, 0}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}};
    s.hybrid_port_order = {2, 0, 3, 1};
    return s;
  }();
  return set;
}

}  // namespace ffa
