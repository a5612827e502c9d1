#pragma once

// Dataflow IR for L-parallel filter structures.
//
// Every edge carries a sign (+1/-1). A node's input value is the signed sum
// of its inbound edges; Add is the only kind with two inbound edges, so a
// subtraction is an Add with one negative edge and counts as one addition.
// Fan-out is implicit. Delay nodes hold `cycles` block-rate registers
// (z^{-L*cycles} at the serial rate). Subfilter nodes are FIR filters in
// z^{-L} whose taps are a signed combination of polyphase phases.

#include "ffa/numeric.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ffa {

using NodeId = std::size_t;

enum class NodeKind { Input, Output, Add, Delay, Subfilter };

std::string_view to_string(NodeKind kind);

/// taps = sum_j combo[j] * phase_j(h), with phases in natural order.
struct SubfilterSpec {
  std::vector<int> combo;
  /// N/L when the graph was synthesized for a known tap count, else 0.
  std::size_t tap_len = 0;

  friend bool operator==(const SubfilterSpec&, const SubfilterSpec&) = default;
};

/// Human-readable combination, e.g. "H0+H1" or "H0-H2".
std::string describe(const SubfilterSpec& spec);

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Add;
  std::size_t port = 0;    // Input / Output
  std::size_t cycles = 0;  // Delay
  SubfilterSpec spec;      // Subfilter
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  int sign = 1;
};

/// Signed reference to a node output, used while building graphs.
struct Signal {
  NodeId node = 0;
  int sign = 1;

  Signal negated() const { return {node, -sign}; }
};

struct CostReport {
  std::size_t additions = 0;
  std::size_t delay_elements = 0;
  std::size_t subfilters = 0;
  /// Sum of subfilter tap lengths (zero when tap lengths are unbound).
  std::size_t multiplications = 0;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

class StructureGraph {
 public:
  StructureGraph() = default;
  StructureGraph(std::size_t parallelism, std::size_t levels, std::string scheme);

  std::size_t parallelism() const { return parallelism_; }
  std::size_t levels() const { return levels_; }
  const std::string& scheme() const { return scheme_; }
  void set_scheme(std::string scheme) { scheme_ = std::move(scheme); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  /// Edge indices, in insertion order.
  const std::vector<std::size_t>& inbound(NodeId id) const { return in_.at(id); }
  const std::vector<std::size_t>& outbound(NodeId id) const { return out_.at(id); }

  /// Raw construction (import, mutation tests). No invariant checks.
  NodeId add_node(NodeKind kind, std::size_t port = 0, std::size_t cycles = 0, SubfilterSpec spec = {});
  void add_edge(NodeId from, NodeId to, int sign = 1);
  void set_edge_sign(std::size_t edge_index, int sign) { edges_.at(edge_index).sign = sign; }

  // Sign-aware builders. A negative operand of a Delay or Subfilter is
  // pushed through to the returned Signal rather than stored on the edge;
  // an Add of two negated operands is built positive and returned negated.
  Signal input(std::size_t port);
  void output(std::size_t port, Signal src);
  Signal add(Signal a, Signal b);
  Signal delay(Signal src, std::size_t cycles = 1);
  Signal subfilter(Signal src, SubfilterSpec spec);

  /// Ids of Input (resp. Output) nodes indexed by port; throws if a port is
  /// missing or duplicated.
  std::vector<NodeId> input_ports() const;
  std::vector<NodeId> output_ports() const;

 private:
  std::size_t parallelism_ = 1;
  std::size_t levels_ = 0;
  std::string scheme_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_;
};

struct Violation {
  std::string rule;
  std::vector<NodeId> nodes;
  std::string detail;
};

/// Every violated structural invariant; empty means the graph is valid.
std::vector<Violation> validate(const StructureGraph& g);

/// Throws std::invalid_argument listing the violations if g is invalid.
void require_valid(const StructureGraph& g);

/// Deterministic topological order (smallest ready id first). Throws
/// std::invalid_argument on a cycle.
std::vector<NodeId> topological_order(const StructureGraph& g);

CostReport count_costs(const StructureGraph& g);

/// Edge-reversed dual: Adds become fan-out points, fan-outs of degree k
/// become chains of k-1 Adds (ascending destination id), and Input port i
/// becomes Output port L-1-i (and vice versa).
StructureGraph transpose_graph(const StructureGraph& g);

/// transpose_graph applied twice. Binary Adds lose their association under
/// transposition, so this fixes each add tree and sign placement to the
/// order transposition produces; the result is a fixed point of the double
/// transpose. Behavior and costs are unchanged.
StructureGraph canonical_form(const StructureGraph& g);

/// Structural isomorphism respecting node kinds, parameters, port numbers
/// and edge signs.
bool isomorphic(const StructureGraph& a, const StructureGraph& b);

/// Copy without nodes that cannot reach an Output; ids are compacted while
/// keeping their relative order.
StructureGraph prune_dead(const StructureGraph& g);

inline constexpr std::string_view kNetlistSchema = "ffa-netlist/1";

/// Malformed netlist text (CLI exit code 3).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string export_json(const StructureGraph& g);
StructureGraph import_json(std::string_view text);
std::string export_dot(const StructureGraph& g);

}  // namespace ffa
