#include "ffa/synthesis.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

namespace ffa {

std::string to_string(const Scheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::IteratedFfa: return "iterated-" + to_string(scheme.form);
    case SchemeKind::Hybrid: return "hybrid";
    case SchemeKind::NaiveBlocked: return "naive";
  }
  return "?";
}

std::vector<std::size_t> nesting_order(std::size_t levels) {
  const std::size_t L = std::size_t{1} << levels;
  std::vector<std::size_t> order(L);
  for (std::size_t p = 0; p < L; ++p) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < levels; ++b)
      if (p & (std::size_t{1} << b)) r |= std::size_t{1} << (levels - 1 - b);
    order[p] = r;
  }
  return order;
}

namespace {

using Combo = std::vector<int>;
using Bus = std::vector<Signal>;
using FilterBus = std::vector<Combo>;

void check_levels(std::size_t levels, const char* who) {
  if (levels < 1) throw UsageError(std::string(who) + ": levels must be >= 1");
  if (levels > 16) throw UsageError(std::string(who) + ": levels must be <= 16");
}

std::size_t tap_len_for(std::size_t tap_count, std::size_t L) {
  if (tap_count % L != 0)
    throw ShapeError("tap count " + std::to_string(tap_count) + " is not divisible by parallelism " +
                     std::to_string(L));
  return tap_count / L;
}

Combo combine(const Combo& a, const Combo& b, int sign) {
  Combo out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + sign * b[i];
  return out;
}

FilterBus unit_filters(std::size_t L) {
  FilterBus f(L, Combo(L, 0));
  for (std::size_t j = 0; j < L; ++j) f[j][j] = 1;
  return f;
}

template <class V>
std::pair<std::vector<V>, std::vector<V>> split_even_odd(const std::vector<V>& bus) {
  std::vector<V> even, odd;
  for (std::size_t c = 0; c < bus.size(); ++c) (c % 2 == 0 ? even : odd).push_back(bus[c]);
  return {even, odd};
}

/// Output side of a direct 2-parallel block on half-width buses. The bus
/// level z^{-1} is a rotation by one component with a block delay on the
/// wrapped component.
Bus direct_post(StructureGraph& g, const Bus& w_even, const Bus& w_mid, const Bus& w_odd, SignForm sign_form) {
  const std::size_t half = w_even.size();
  Bus rotated(half);
  rotated[0] = g.delay(w_odd[half - 1]);
  for (std::size_t c = 1; c < half; ++c) rotated[c] = w_odd[c - 1];
  Bus out(2 * half);
  for (std::size_t c = 0; c < half; ++c) {
    out[2 * c] = g.add(w_even[c], rotated[c]);
    if (sign_form == SignForm::Plus)
      out[2 * c + 1] = g.add(g.add(w_mid[c], w_even[c].negated()), w_odd[c].negated());
    else
      out[2 * c + 1] = g.add(g.add(w_even[c], w_odd[c]), w_mid[c].negated());
  }
  return out;
}

using LeafFn = std::function<Bus(const Bus&, const FilterBus&)>;

/// Direct-form levels on flat buses down to `leaf_width`.
Bus direct_levels(StructureGraph& g, const Bus& in, const FilterBus& filt, SignForm sign_form,
                  std::size_t leaf_width, const LeafFn& leaf) {
  if (in.size() == leaf_width) return leaf(in, filt);
  const int s = sign_form == SignForm::Plus ? 1 : -1;
  const auto [in_e, in_o] = split_even_odd(in);
  const auto [f_e, f_o] = split_even_odd(filt);
  Bus in_m(in_e.size());
  FilterBus f_m(f_e.size());
  for (std::size_t c = 0; c < in_e.size(); ++c) {
    in_m[c] = g.add(in_e[c], s > 0 ? in_o[c] : in_o[c].negated());
    f_m[c] = combine(f_e[c], f_o[c], s);
  }
  const Bus w_e = direct_levels(g, in_e, f_e, sign_form, leaf_width, leaf);
  const Bus w_m = direct_levels(g, in_m, f_m, sign_form, leaf_width, leaf);
  const Bus w_o = direct_levels(g, in_o, f_o, sign_form, leaf_width, leaf);
  return direct_post(g, w_e, w_m, w_o, sign_form);
}

/// Transposed-plus input network for one 2-sample pair:
/// (p1 - p0, p0, z^-L p1 - p0) feeding H0, H0+H1, H1.
std::array<Signal, 3> transposed_plus_inputs(StructureGraph& g, Signal p0, Signal p1) {
  return {g.add(p1, p0.negated()), p0, g.add(g.delay(p1), p0.negated())};
}

Bus transposed_plus_core(StructureGraph& g, const std::array<Signal, 3>& u, const FilterBus& filt,
                         std::size_t tap_len) {
  const Signal s0 = g.subfilter(u[0], {filt[0], tap_len});
  const Signal s1 = g.subfilter(u[1], {combine(filt[0], filt[1], 1), tap_len});
  const Signal s2 = g.subfilter(u[2], {filt[1], tap_len});
  return {g.add(s1, s2), g.add(s1, s0)};
}

using Unit = std::array<Signal, 3>;

Bus hybrid_units(StructureGraph& g, const std::vector<Unit>& units, const FilterBus& filt, std::size_t tap_len) {
  if (units.size() == 1) return transposed_plus_core(g, units[0], filt, tap_len);
  const auto [u_e, u_o] = split_even_odd(units);
  const auto [f_e, f_o] = split_even_odd(filt);
  std::vector<Unit> u_m(u_e.size());
  for (std::size_t i = 0; i < u_e.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) u_m[i][k] = g.add(u_e[i][k], u_o[i][k]);
  FilterBus f_m(f_e.size());
  for (std::size_t c = 0; c < f_e.size(); ++c) f_m[c] = combine(f_e[c], f_o[c], 1);
  const Bus w_e = hybrid_units(g, u_e, f_e, tap_len);
  const Bus w_m = hybrid_units(g, u_m, f_m, tap_len);
  const Bus w_o = hybrid_units(g, u_o, f_o, tap_len);
  return direct_post(g, w_e, w_m, w_o, SignForm::Plus);
}

Bus make_inputs(StructureGraph& g) {
  Bus in;
  for (std::size_t p = 0; p < g.parallelism(); ++p) in.push_back(g.input(p));
  return in;
}

void bind_outputs(StructureGraph& g, const Bus& out) {
  for (std::size_t p = 0; p < out.size(); ++p) g.output(p, out[p]);
}

}  // namespace

StructureGraph synthesize_iterated(std::size_t levels, Ffa2Form form, std::size_t tap_count) {
  check_levels(levels, "synthesize_iterated");
  const std::size_t L = std::size_t{1} << levels;
  const std::size_t tap_len = tap_len_for(tap_count, L);
  if (form.orientation == Orientation::Transposed) {
    StructureGraph t = transpose_graph(synthesize_iterated(levels, {Orientation::Direct, form.sign_form}, tap_count));
    t.set_scheme("iterated-" + to_string(form));
    return t;
  }
  StructureGraph g(L, levels, "iterated-" + to_string(form));
  const Bus in = make_inputs(g);
  const LeafFn leaf = [&](const Bus& b, const FilterBus& f) -> Bus { return {g.subfilter(b[0], {f[0], tap_len})}; };
  bind_outputs(g, direct_levels(g, in, unit_filters(L), form.sign_form, 1, leaf));
  return canonical_form(g);
}

StructureGraph synthesize_hybrid(std::size_t levels, std::size_t tap_count) {
  check_levels(levels, "synthesize_hybrid");
  if (levels == 1) {
    StructureGraph g = build_ffa2(kDirectPlus, tap_count);
    g.set_scheme("hybrid");
    return g;
  }
  const std::size_t L = std::size_t{1} << levels;
  const std::size_t tap_len = tap_len_for(tap_count, L);
  StructureGraph g(L, levels, "hybrid");
  const Bus in = make_inputs(g);
  std::vector<Unit> units;
  for (std::size_t r = 0; r < L / 2; ++r) units.push_back(transposed_plus_inputs(g, in[r], in[r + L / 2]));
  bind_outputs(g, hybrid_units(g, units, unit_filters(L), tap_len));
  return canonical_form(g);
}

StructureGraph synthesize_hybrid_unshared(std::size_t levels, std::size_t tap_count) {
  check_levels(levels, "synthesize_hybrid_unshared");
  if (levels == 1) return synthesize_hybrid(1, tap_count);
  const std::size_t L = std::size_t{1} << levels;
  const std::size_t tap_len = tap_len_for(tap_count, L);
  StructureGraph g(L, levels, "hybrid-unshared");
  const Bus in = make_inputs(g);
  const LeafFn leaf = [&](const Bus& b, const FilterBus& f) -> Bus {
    return transposed_plus_core(g, transposed_plus_inputs(g, b[0], b[1]), f, tap_len);
  };
  bind_outputs(g, direct_levels(g, in, unit_filters(L), SignForm::Plus, 2, leaf));
  return canonical_form(g);
}

StructureGraph synthesize_naive(std::size_t levels, std::size_t tap_count) {
  if (levels > 8) throw UsageError("synthesize_naive: levels must be <= 8");
  const std::size_t L = std::size_t{1} << levels;
  const std::size_t tap_len = tap_len_for(tap_count, L);
  const FilterBus unit = unit_filters(L);
  StructureGraph g(L, levels, "naive");
  const Bus in = make_inputs(g);
  // Y_i = sum_{j<=i} H_{i-j} X_j + z^-L sum_{j>i} H_{L+i-j} X_j
  for (std::size_t i = 0; i < L; ++i) {
    std::optional<Signal> now, later;
    for (std::size_t j = 0; j <= i; ++j) {
      const Signal t = g.subfilter(in[j], {unit[i - j], tap_len});
      now = now ? g.add(*now, t) : t;
    }
    for (std::size_t j = i + 1; j < L; ++j) {
      const Signal t = g.subfilter(in[j], {unit[L + i - j], tap_len});
      later = later ? g.add(*later, t) : t;
    }
    g.output(i, later ? g.add(*now, g.delay(*later)) : *now);
  }
  return canonical_form(g);
}

StructureGraph synthesize(const Scheme& scheme, std::size_t tap_count) {
  switch (scheme.kind) {
    case SchemeKind::IteratedFfa: return synthesize_iterated(scheme.levels, scheme.form, tap_count);
    case SchemeKind::Hybrid: return synthesize_hybrid(scheme.levels, tap_count);
    case SchemeKind::NaiveBlocked: return synthesize_naive(scheme.levels, tap_count);
  }
  throw std::invalid_argument("synthesize: unknown scheme");
}

ShareRegion parse_share_region(std::string_view text) {
  if (text == "input") return ShareRegion::InputSide;
  if (text == "output") return ShareRegion::OutputSide;
  if (text == "both") return ShareRegion::Both;
  throw UsageError("unknown sharing region '" + std::string(text) + "' (expected input, output or both)");
}

// ---------------------------------------------------------------------------
// Substructure sharing

namespace {

/// Linear combination of (source node, delay in blocks) terms. Sources are
/// Input and Subfilter nodes.
using Term = std::pair<NodeId, std::size_t>;
using LinearValue = std::vector<std::pair<Term, long long>>;

LinearValue scaled_sum(const LinearValue& a, long long sa, const LinearValue& b, long long sb) {
  LinearValue out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.emplace_back(a[i].first, sa * a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sb * b[j].second);
      ++j;
    } else {
      const long long c = sa * a[i].second + sb * b[j].second;
      if (c != 0) out.emplace_back(a[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

struct ValueHash {
  std::size_t operator()(const LinearValue& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& [t, c] : v) {
      h = (h ^ t.first) * 1099511628211ULL;
      h = (h ^ t.second) * 1099511628211ULL;
      h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ULL;
    }
    return h;
  }
};

struct Analysis {
  std::vector<NodeId> order;
  std::vector<std::size_t> rank;  // position in `order`
  std::vector<LinearValue> value;
  std::vector<bool> output_side;  // depends on a subfilter output
};

Analysis analyze(const StructureGraph& g) {
  Analysis a;
  a.order = topological_order(g);
  a.rank.resize(g.nodes().size());
  for (std::size_t i = 0; i < a.order.size(); ++i) a.rank[a.order[i]] = i;
  a.value.resize(g.nodes().size());
  a.output_side.assign(g.nodes().size(), false);
  for (NodeId v : a.order) {
    const Node& n = g.node(v);
    switch (n.kind) {
      case NodeKind::Input:
        a.value[v] = {{{v, 0}, 1}};
        break;
      case NodeKind::Subfilter:
        a.value[v] = {{{v, 0}, 1}};
        a.output_side[v] = true;
        break;
      case NodeKind::Add: {
        const Edge& e0 = g.edges()[g.inbound(v)[0]];
        const Edge& e1 = g.edges()[g.inbound(v)[1]];
        a.value[v] = scaled_sum(a.value[e0.from], e0.sign, a.value[e1.from], e1.sign);
        a.output_side[v] = a.output_side[e0.from] || a.output_side[e1.from];
        break;
      }
      case NodeKind::Delay: {
        const Edge& e = g.edges()[g.inbound(v)[0]];
        LinearValue shifted = a.value[e.from];
        for (auto& [t, c] : shifted) {
          t.second += n.cycles;
          c *= e.sign;
        }
        a.value[v] = std::move(shifted);
        a.output_side[v] = a.output_side[e.from];
        break;
      }
      case NodeKind::Output:
        break;
    }
  }
  return a;
}

bool in_region(const Analysis& a, NodeId v, ShareRegion region) {
  switch (region) {
    case ShareRegion::InputSide: return !a.output_side[v];
    case ShareRegion::OutputSide: return a.output_side[v];
    case ShareRegion::Both: return true;
  }
  return false;
}

std::pair<std::size_t, std::size_t> objective(const StructureGraph& g, ShareRegion region) {
  const CostReport c = count_costs(g);
  if (region == ShareRegion::OutputSide) return {c.delay_elements, c.additions};
  return {c.additions, c.delay_elements};
}

/// Copy of g in which the inbound edges of `target` are replaced by the
/// edges produced by `rewire` (which may also create new nodes), followed by
/// dead-node pruning.
template <class Rewire>
StructureGraph rebuilt(const StructureGraph& g, NodeId target, Rewire rewire) {
  StructureGraph out(g.parallelism(), g.levels(), g.scheme());
  for (const Node& n : g.nodes()) out.add_node(n.kind, n.port, n.cycles, n.spec);
  for (const Edge& e : g.edges())
    if (e.to != target) out.add_edge(e.from, e.to, e.sign);
  rewire(out);
  return prune_dead(out);
}

/// Redirects every consumer of `dup` to `keep`.
StructureGraph merged(const StructureGraph& g, NodeId dup, NodeId keep) {
  StructureGraph out(g.parallelism(), g.levels(), g.scheme());
  for (const Node& n : g.nodes()) out.add_node(n.kind, n.port, n.cycles, n.spec);
  for (const Edge& e : g.edges()) out.add_edge(e.from == dup ? keep : e.from, e.to, e.sign);
  return prune_dead(out);
}

std::optional<StructureGraph> merge_duplicates(const StructureGraph& g, const Analysis& a, ShareRegion region) {
  std::unordered_map<LinearValue, NodeId, ValueHash> seen;
  for (NodeId v : a.order) {
    const Node& n = g.node(v);
    if (n.kind == NodeKind::Output) continue;
    const auto [it, inserted] = seen.emplace(a.value[v], v);
    if (inserted) continue;
    if ((n.kind == NodeKind::Add || n.kind == NodeKind::Delay) && in_region(a, v, region))
      return merged(g, v, it->second);
  }
  return std::nullopt;
}

bool feeds_only(const StructureGraph& g, NodeId src, NodeId v) {
  const Node& n = g.node(src);
  if (n.kind != NodeKind::Add && n.kind != NodeKind::Delay) return false;
  const auto& outs = g.outbound(src);
  return std::all_of(outs.begin(), outs.end(), [&](std::size_t ei) { return g.edges()[ei].to == v; });
}

/// v and every node reachable from it; these cannot become operands of v.
std::vector<bool> downstream_of(const StructureGraph& g, NodeId v) {
  std::vector<bool> seen(g.nodes().size(), false);
  std::vector<NodeId> stack{v};
  seen[v] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (std::size_t ei : g.outbound(u)) {
      const NodeId w = g.edges()[ei].to;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

std::optional<StructureGraph> reexpress(const StructureGraph& g, const Analysis& a, ShareRegion region) {
  std::unordered_map<LinearValue, std::vector<NodeId>, ValueHash> by_value;
  for (NodeId v : a.order)
    if (g.node(v).kind != NodeKind::Output) by_value[a.value[v]].push_back(v);
  const auto base = objective(g, region);

  // Wider combinations first, so they get split into narrower existing
  // ones rather than the other way round.
  std::vector<NodeId> candidates;
  for (const Node& n : g.nodes())
    if (n.kind == NodeKind::Add && in_region(a, n.id, region)) candidates.push_back(n.id);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](NodeId x, NodeId y) { return a.value[x].size() > a.value[y].size(); });

  for (const NodeId v : candidates) {
    const Edge& e0 = g.edges()[g.inbound(v)[0]];
    const Edge& e1 = g.edges()[g.inbound(v)[1]];
    // Rewiring v can only pay off if one of its operands dies with it.
    if (!feeds_only(g, e0.from, v) && !feeds_only(g, e1.from, v)) continue;
    const std::vector<bool> below = downstream_of(g, v);

    for (NodeId p : a.order) {
      if (below[p] || g.node(p).kind == NodeKind::Output) continue;
      for (const int qs : {1, -1}) {
        // V = P + qs * Q
        const LinearValue want = scaled_sum(a.value[v], qs, a.value[p], -qs);
        const auto hit = by_value.find(want);
        if (hit == by_value.end()) continue;
        for (NodeId q : hit->second) {
          if (q == p || below[q]) continue;
          const bool same = (e0.from == p && e1.from == q && e0.sign == 1 && e1.sign == qs) ||
                            (e1.from == p && e0.from == q && e1.sign == 1 && e0.sign == qs);
          if (same) continue;
          StructureGraph trial = rebuilt(g, v, [&](StructureGraph& out) {
            out.add_edge(p, v, 1);
            out.add_edge(q, v, qs);
          });
          if (objective(trial, region) < base) return trial;
        }
      }
    }
  }
  return std::nullopt;
}

/// Copy of g in which every consumer of `v` reads the signal produced by
/// `build` instead, followed by dead-node pruning.
template <class Build>
StructureGraph substituted(const StructureGraph& g, NodeId v, Build build) {
  StructureGraph out(g.parallelism(), g.levels(), g.scheme());
  for (const Node& n : g.nodes()) out.add_node(n.kind, n.port, n.cycles, n.spec);
  for (const Edge& e : g.edges())
    if (e.from != v) out.add_edge(e.from, e.to, e.sign);
  const Signal repl = build(out);
  for (const Edge& e : g.edges())
    if (e.from == v) out.add_edge(repl.node, e.to, e.sign * repl.sign);
  return prune_dead(out);
}

/// Replaces a Delay whose value is a signed sum of two (or, when delays are
/// minimized first, three) existing signals by adds over those signals.
std::optional<StructureGraph> delay_as_sum(const StructureGraph& g, const Analysis& a, ShareRegion region) {
  std::unordered_map<LinearValue, std::vector<NodeId>, ValueHash> by_value;
  for (NodeId v : a.order)
    if (g.node(v).kind != NodeKind::Output) by_value[a.value[v]].push_back(v);
  const auto base = objective(g, region);
  const bool three_terms = region == ShareRegion::OutputSide;

  for (const Node& n : g.nodes()) {
    const NodeId v = n.id;
    if (n.kind != NodeKind::Delay || !in_region(a, v, region)) continue;
    const std::vector<bool> below = downstream_of(g, v);
    auto usable = [&](NodeId x) { return !below[x] && g.node(x).kind != NodeKind::Output; };

    for (NodeId p : a.order) {
      if (!usable(p)) continue;
      for (const int ps : {1, -1}) {
        const LinearValue rest = scaled_sum(a.value[v], 1, a.value[p], -ps);
        if (rest.empty()) continue;
        // two terms: v = ps*p + qs*q
        for (const int qs : {1, -1}) {
          LinearValue want = rest;
          for (auto& term : want) term.second *= qs;
          const auto hit = by_value.find(want);
          if (hit == by_value.end()) continue;
          for (NodeId q : hit->second) {
            if (q == p || !usable(q)) continue;
            StructureGraph trial =
                substituted(g, v, [&](StructureGraph& out) { return out.add(Signal{p, ps}, Signal{q, qs}); });
            if (objective(trial, region) < base) return trial;
          }
        }
        if (!three_terms) continue;
        // three terms: v = ps*p + qs*q + rs*r
        for (NodeId q : a.order) {
          if (q == p || !usable(q)) continue;
          for (const int qs : {1, -1}) {
            const LinearValue rest2 = scaled_sum(rest, 1, a.value[q], -qs);
            if (rest2.empty()) continue;
            for (const int rs : {1, -1}) {
              LinearValue want = rest2;
              for (auto& term : want) term.second *= rs;
              const auto hit = by_value.find(want);
              if (hit == by_value.end()) continue;
              for (NodeId r : hit->second) {
                if (r == p || r == q || !usable(r)) continue;
                StructureGraph trial = substituted(g, v, [&](StructureGraph& out) {
                  return out.add(out.add(Signal{p, ps}, Signal{q, qs}), Signal{r, rs});
                });
                if (objective(trial, region) < base) return trial;
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

/// An operand of the form sign*D(a) + other, where `other` may be absent
/// (the operand is a bare Delay).
struct DelayedSum {
  NodeId delay_node;
  int delay_sign;  // sign of the delay operand within the Add
  std::optional<NodeId> other;
  int other_sign = 1;
};

std::optional<DelayedSum> as_delayed_sum(const StructureGraph& g, NodeId v) {
  if (g.node(v).kind == NodeKind::Delay) return DelayedSum{v, 1, std::nullopt, 1};
  if (g.node(v).kind != NodeKind::Add) return std::nullopt;
  const Edge& e0 = g.edges()[g.inbound(v)[0]];
  const Edge& e1 = g.edges()[g.inbound(v)[1]];
  if (g.node(e0.from).kind == NodeKind::Delay) return DelayedSum{e0.from, e0.sign, e1.from, e1.sign};
  if (g.node(e1.from).kind == NodeKind::Delay) return DelayedSum{e1.from, e1.sign, e0.from, e0.sign};
  return std::nullopt;
}

/// Every rewrite (D a +- b) +- (D c +- d) -> D (a +- c) +- (b +- d)
/// available in g, in ascending id of the rewritten Add.
std::vector<StructureGraph> factor_delay_moves(const StructureGraph& g, const Analysis& a, ShareRegion region) {
  std::vector<StructureGraph> moves;
  for (const Node& n : g.nodes()) {
    const NodeId s = n.id;
    if (n.kind != NodeKind::Add || !in_region(a, s, region)) continue;
    const Edge& ep = g.edges()[g.inbound(s)[0]];
    const Edge& eq = g.edges()[g.inbound(s)[1]];
    const auto p = as_delayed_sum(g, ep.from);
    const auto q = as_delayed_sum(g, eq.from);
    if (!p || !q || ep.from == eq.from || p->delay_node == q->delay_node) continue;
    const Node& dp = g.node(p->delay_node);
    const Node& dq = g.node(q->delay_node);
    if (dp.cycles != dq.cycles) continue;
    const Edge& dpe = g.edges()[g.inbound(dp.id)[0]];
    const Edge& dqe = g.edges()[g.inbound(dq.id)[0]];
    if (dpe.from == dqe.from) continue;
    // s = ep.sign*(p.ds*D(dpe.sign*a) + p.os*b) + eq.sign*(q.ds*D(dqe.sign*c) + q.os*d)
    const Signal a_sig{dpe.from, ep.sign * p->delay_sign * dpe.sign};
    const Signal c_sig{dqe.from, eq.sign * q->delay_sign * dqe.sign};
    std::vector<Signal> rest;
    if (p->other) rest.push_back({*p->other, ep.sign * p->other_sign});
    if (q->other) rest.push_back({*q->other, eq.sign * q->other_sign});
    if (rest.empty()) {
      // s = D a +- D c collapses to a single delay
      moves.push_back(substituted(g, s, [&](StructureGraph& out) { return out.delay(out.add(a_sig, c_sig), dp.cycles); }));
      continue;
    }
    moves.push_back(rebuilt(g, s, [&](StructureGraph& out) {
      const Signal delayed = out.delay(out.add(a_sig, c_sig), dp.cycles);
      const Signal r = rest.size() == 2 ? out.add(rest[0], rest[1]) : rest[0];
      out.add_edge(delayed.node, s, delayed.sign);
      out.add_edge(r.node, s, r.sign);
    }));
  }
  return moves;
}

/// Every cost-neutral regrouping (a +- b) +- c -> (a +- c) +- b of an Add
/// whose inner Add has no other consumer. Factoring only sees the operands
/// of one Add, so these moves expose pairs split across an add tree.
std::vector<StructureGraph> regroup_moves(const StructureGraph& g, const Analysis& a, ShareRegion region) {
  std::vector<StructureGraph> moves;
  for (const Node& n : g.nodes()) {
    const NodeId s = n.id;
    if (n.kind != NodeKind::Add || !in_region(a, s, region)) continue;
    for (int k = 0; k < 2; ++k) {
      const Edge& inner = g.edges()[g.inbound(s)[k]];
      const Edge& outer = g.edges()[g.inbound(s)[1 - k]];
      if (g.node(inner.from).kind != NodeKind::Add || g.outbound(inner.from).size() != 1) continue;
      const Edge& e0 = g.edges()[g.inbound(inner.from)[0]];
      const Edge& e1 = g.edges()[g.inbound(inner.from)[1]];
      const Signal c{outer.from, outer.sign};
      for (const auto& [keep, move] : {std::pair{&e0, &e1}, std::pair{&e1, &e0}}) {
        const Signal kept{keep->from, inner.sign * keep->sign};
        const Signal moved{move->from, inner.sign * move->sign};
        if (kept.node == c.node) continue;
        moves.push_back(rebuilt(g, s, [&](StructureGraph& out) {
          const Signal pair = out.add(kept, c);
          out.add_edge(pair.node, s, pair.sign);
          out.add_edge(moved.node, s, moved.sign);
        }));
      }
    }
  }
  return moves;
}

/// Lookahead depth for delay factoring when delays are minimized first.
constexpr int kFactorLookahead = 3;

std::optional<StructureGraph> factor_search(const StructureGraph& g, ShareRegion region,
                                            std::pair<std::size_t, std::size_t> target, int depth) {
  const Analysis a = analyze(g);
  for (StructureGraph& m : factor_delay_moves(g, a, region)) {
    const auto obj = objective(m, region);
    if (obj < target) return std::move(m);
    if (depth > 1 && obj.first <= target.first)
      if (auto deeper = factor_search(m, region, target, depth - 1)) return deeper;
  }
  if (depth > 1)
    for (StructureGraph& m : regroup_moves(g, a, region))
      if (auto deeper = factor_search(m, region, target, depth - 1)) return deeper;
  return std::nullopt;
}

std::optional<StructureGraph> factor_delays(const StructureGraph& g, ShareRegion region) {
  const int depth = region == ShareRegion::OutputSide ? kFactorLookahead : 1;
  return factor_search(g, region, objective(g, region), depth);
}

}  // namespace

StructureGraph share_substructures(const StructureGraph& g, ShareRegion region) {
  require_valid(g);
  StructureGraph cur = prune_dead(g);
  for (;;) {
    const Analysis a = analyze(cur);
    if (auto next = merge_duplicates(cur, a, region)) {
      cur = std::move(*next);
      continue;
    }
    if (auto next = reexpress(cur, a, region)) {
      cur = std::move(*next);
      continue;
    }
    if (auto next = factor_delays(cur, region)) {
      cur = std::move(*next);
      continue;
    }
    if (auto next = delay_as_sum(cur, a, region)) {
      cur = std::move(*next);
      continue;
    }
    break;
  }
  return cur;
}

}  // namespace ffa
