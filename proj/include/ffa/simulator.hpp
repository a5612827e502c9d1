#pragma once

// Cycle-accurate block-rate execution of a StructureGraph.
//
// One clock cycle consumes and produces L samples. Nodes are evaluated in a
// single topological order fixed at construction; Delay nodes return the
// value stored `cycles` blocks earlier before storing the current one.
// Subfilter nodes are FIR filters over their own block-rate stream.

#include "ffa/numeric.hpp"
#include "ffa/polyphase.hpp"
#include "ffa/structure_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ffa {

namespace detail {

/// Subfilter taps in natural phase order: sum_j combo[j] * phase_j(h).
template <class T>
std::vector<T> combine_phases(const SubfilterSpec& spec, const PolyphaseSet<T>& phases) {
  std::vector<T> taps(phases.phases.front().size(), T(0));
  for (std::size_t j = 0; j < spec.combo.size(); ++j) {
    if (spec.combo[j] == 0) continue;
    for (std::size_t k = 0; k < taps.size(); ++k) taps[k] += T(spec.combo[j]) * phases.phases[j][k];
  }
  return taps;
}

}  // namespace detail

template <class T>
class Simulator {
 public:
  Simulator(const StructureGraph& g, const std::vector<T>& h) : parallelism_(g.parallelism()) {
    require_valid(g);
    const std::size_t L = parallelism_;
    if (h.empty() || h.size() % L != 0)
      throw ShapeError("tap count " + std::to_string(h.size()) + " is not a positive multiple of L = " +
                       std::to_string(L));
    const auto phases = polyphase_decompose(h, L);
    const std::size_t tap_len = h.size() / L;

    const auto order = topological_order(g);
    std::vector<std::size_t> slot(g.nodes().size());
    for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = i;
    program_.reserve(order.size());
    for (NodeId v : order) {
      const Node& n = g.node(v);
      Op op;
      op.kind = n.kind;
      op.port = n.port;
      for (std::size_t ei : g.inbound(v)) {
        op.src[op.arity] = slot[g.edges()[ei].from];
        op.sign[op.arity] = g.edges()[ei].sign;
        ++op.arity;
      }
      if (n.kind == NodeKind::Delay) {
        op.state.assign(n.cycles, T(0));
      } else if (n.kind == NodeKind::Subfilter) {
        if (n.spec.tap_len != 0 && n.spec.tap_len != tap_len)
          throw ShapeError("subfilter expects " + std::to_string(n.spec.tap_len) + " taps, filter provides " +
                           std::to_string(tap_len));
        op.taps = detail::combine_phases(n.spec, phases);
        op.state.assign(tap_len, T(0));
      }
      program_.push_back(std::move(op));
    }
    values_.assign(program_.size(), T(0));
  }

  std::size_t parallelism() const { return parallelism_; }

  /// Clears all registers and subfilter histories.
  void reset() {
    for (Op& op : program_) {
      std::fill(op.state.begin(), op.state.end(), T(0));
      op.cursor = 0;
    }
  }

  /// Runs one clock cycle: L input samples in, L output samples out.
  void step(std::span<const T> in_block, std::span<T> out_block) {
    for (std::size_t i = 0; i < program_.size(); ++i) {
      Op& op = program_[i];
      T& v = values_[i];
      switch (op.kind) {
        case NodeKind::Input:
          v = in_block[op.port];
          break;
        case NodeKind::Add:
          v = signed_input(op, 0);
          if (op.sign[1] > 0) v += values_[op.src[1]];
          else v -= values_[op.src[1]];
          break;
        case NodeKind::Delay: {
          T incoming = signed_input(op, 0);
          v = std::move(op.state[op.cursor]);
          op.state[op.cursor] = std::move(incoming);
          op.cursor = (op.cursor + 1) % op.state.size();
          break;
        }
        case NodeKind::Subfilter: {
          // state is a ring holding the last tap_len inputs; cursor points
          // at the newest after the write below.
          const std::size_t n = op.state.size();
          op.cursor = (op.cursor + n - 1) % n;
          op.state[op.cursor] = signed_input(op, 0);
          v = T(0);
          for (std::size_t k = 0; k < n; ++k) v += op.taps[k] * op.state[(op.cursor + k) % n];
          break;
        }
        case NodeKind::Output:
          out_block[op.port] = signed_input(op, 0);
          break;
      }
    }
  }

  /// Filters x (zero-padded to whole blocks) from zero state; returns
  /// len(x) samples.
  std::vector<T> run(std::span<const T> x) {
    reset();
    const std::size_t L = parallelism_;
    const std::size_t blocks = (x.size() + L - 1) / L;
    std::vector<T> in(L), y(blocks * L, T(0));
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t p = 0; p < L; ++p) in[p] = b * L + p < x.size() ? x[b * L + p] : T(0);
      step(in, std::span<T>(y).subspan(b * L, L));
    }
    y.resize(x.size());
    return y;
  }

 private:
  struct Op {
    NodeKind kind = NodeKind::Add;
    std::size_t port = 0;
    std::size_t arity = 0;
    std::size_t src[2] = {0, 0};
    int sign[2] = {1, 1};
    std::vector<T> taps;
    std::vector<T> state;
    std::size_t cursor = 0;
  };

  T signed_input(const Op& op, std::size_t k) const {
    return op.sign[k] > 0 ? values_[op.src[k]] : T(-values_[op.src[k]]);
  }

  std::size_t parallelism_;
  std::vector<Op> program_;
  std::vector<T> values_;
};

/// Output of g driven by x with taps h; equals convolve_serial(h, x)
/// truncated to len(x) for a correct structure.
template <class T>
std::vector<T> simulate(const StructureGraph& g, const std::vector<T>& h, std::span<const T> x) {
  Simulator<T> sim(g, h);
  return sim.run(x);
}

template <class T>
std::vector<T> simulate(const StructureGraph& g, const std::vector<T>& h, const std::vector<T>& x) {
  return simulate(g, h, std::span<const T>(x));
}

struct EquivalenceReport {
  bool pass = true;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// Largest |structure - oracle| over all samples (relative error in
  /// floating-point mode is checked separately against 1e-9).
  double max_abs_diff = 0.0;
  std::size_t input_len = 0;
};

inline constexpr double kFloatRelativeTolerance = 1e-9;

/// Runs `trials` random integer input vectors (uniform on [-8, 8]) through
/// g and compares every sample with the serial convolution oracle. Exact
/// types must match exactly; double must match within 1e-9 relative.
template <class T>
EquivalenceReport verify_equivalence(const StructureGraph& g, const std::vector<T>& h, std::size_t trials,
                                     std::uint64_t seed, std::size_t input_len = 0) {
  Simulator<T> sim(g, h);
  if (input_len == 0) input_len = 16 * g.parallelism();
  EquivalenceReport report;
  report.trials = trials;
  report.seed = seed;
  report.input_len = input_len;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-8, 8);
  std::vector<T> x(input_len);
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& s : x) s = T(dist(rng));
    const std::vector<T> got = sim.run(x);
    const std::vector<T> want = convolve_serial(h, x);
    for (std::size_t i = 0; i < got.size(); ++i) {
      if constexpr (std::is_floating_point_v<T>) {
        const double diff = std::abs(got[i] - want[i]);
        report.max_abs_diff = std::max(report.max_abs_diff, diff);
        if (diff > kFloatRelativeTolerance * std::max(1.0, std::abs(want[i]))) report.pass = false;
      } else {
        if (got[i] != want[i]) {
          report.pass = false;
          const T d = got[i] > want[i] ? T(got[i] - want[i]) : T(want[i] - got[i]);
          report.max_abs_diff = std::max(report.max_abs_diff, static_cast<double>(d));
        }
      }
    }
  }
  return report;
}

}  // namespace ffa
