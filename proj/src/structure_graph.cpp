#include "ffa/structure_graph.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <tuple>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ffa {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Input: return "input";
    case NodeKind::Output: return "output";
    case NodeKind::Add: return "add";
    case NodeKind::Delay: return "delay";
    case NodeKind::Subfilter: return "subfilter";
  }
  return "?";
}

std::string describe(const SubfilterSpec& spec) {
  std::string out;
  for (std::size_t j = 0; j < spec.combo.size(); ++j) {
    const int c = spec.combo[j];
    if (c == 0) continue;
    if (c < 0) out += "-";
    else if (!out.empty()) out += "+";
    if (c != 1 && c != -1) out += std::to_string(c < 0 ? -c : c) + "*";
    out += "H" + std::to_string(j);
  }
  return out.empty() ? "0" : out;
}

StructureGraph::StructureGraph(std::size_t parallelism, std::size_t levels, std::string scheme)
    : parallelism_(parallelism), levels_(levels), scheme_(std::move(scheme)) {
  if (parallelism == 0) throw std::invalid_argument("StructureGraph: parallelism must be >= 1");
}

NodeId StructureGraph::add_node(NodeKind kind, std::size_t port, std::size_t cycles, SubfilterSpec spec) {
  const NodeId id = nodes_.size();
  nodes_.push_back(Node{id, kind, port, cycles, std::move(spec)});
  in_.emplace_back();
  out_.emplace_back();
  return id;
}

void StructureGraph::add_edge(NodeId from, NodeId to, int sign) {
  if (from >= nodes_.size() || to >= nodes_.size()) throw std::out_of_range("add_edge: unknown node id");
  edges_.push_back(Edge{from, to, sign});
  out_[from].push_back(edges_.size() - 1);
  in_[to].push_back(edges_.size() - 1);
}

Signal StructureGraph::input(std::size_t port) { return {add_node(NodeKind::Input, port), 1}; }

void StructureGraph::output(std::size_t port, Signal src) {
  const NodeId id = add_node(NodeKind::Output, port);
  add_edge(src.node, id, src.sign);
}

Signal StructureGraph::add(Signal a, Signal b) {
  int result_sign = 1;
  if (a.sign < 0 && b.sign < 0) {
    a = a.negated();
    b = b.negated();
    result_sign = -1;
  }
  const NodeId id = add_node(NodeKind::Add);
  add_edge(a.node, id, a.sign);
  add_edge(b.node, id, b.sign);
  return {id, result_sign};
}

Signal StructureGraph::delay(Signal src, std::size_t cycles) {
  const NodeId id = add_node(NodeKind::Delay, 0, cycles);
  add_edge(src.node, id, 1);
  return {id, src.sign};
}

Signal StructureGraph::subfilter(Signal src, SubfilterSpec spec) {
  const NodeId id = add_node(NodeKind::Subfilter, 0, 0, std::move(spec));
  add_edge(src.node, id, 1);
  return {id, src.sign};
}

namespace {

std::vector<NodeId> ports_of(const StructureGraph& g, NodeKind kind) {
  std::vector<std::optional<NodeId>> ports(g.parallelism());
  for (const Node& n : g.nodes()) {
    if (n.kind != kind) continue;
    if (n.port >= ports.size() || ports[n.port]) {
      throw std::invalid_argument(std::string(to_string(kind)) + " port " + std::to_string(n.port) +
                                  " out of range or duplicated");
    }
    ports[n.port] = n.id;
  }
  std::vector<NodeId> out;
  for (std::size_t p = 0; p < ports.size(); ++p) {
    if (!ports[p]) throw std::invalid_argument(std::string(to_string(kind)) + " port " + std::to_string(p) + " missing");
    out.push_back(*ports[p]);
  }
  return out;
}

std::size_t expected_inbound(NodeKind kind) {
  switch (kind) {
    case NodeKind::Input: return 0;
    case NodeKind::Add: return 2;
    default: return 1;
  }
}

/// Kahn's algorithm; returns the ordered prefix it managed to emit.
std::vector<NodeId> kahn(const StructureGraph& g) {
  std::vector<std::size_t> indegree(g.nodes().size());
  for (const Edge& e : g.edges()) ++indegree[e.to];
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < indegree.size(); ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<NodeId> order;
  order.reserve(indegree.size());
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t ei : g.outbound(v))
      if (--indegree[g.edges()[ei].to] == 0) ready.push(g.edges()[ei].to);
  }
  return order;
}

std::vector<bool> reach(const StructureGraph& g, NodeKind seed_kind, bool forward) {
  std::vector<bool> seen(g.nodes().size(), false);
  std::vector<NodeId> stack;
  for (const Node& n : g.nodes())
    if (n.kind == seed_kind) {
      seen[n.id] = true;
      stack.push_back(n.id);
    }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (std::size_t ei : forward ? g.outbound(v) : g.inbound(v)) {
      const NodeId w = forward ? g.edges()[ei].to : g.edges()[ei].from;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<NodeId> StructureGraph::input_ports() const { return ports_of(*this, NodeKind::Input); }
std::vector<NodeId> StructureGraph::output_ports() const { return ports_of(*this, NodeKind::Output); }

std::vector<Violation> validate(const StructureGraph& g) {
  std::vector<Violation> out;
  const std::size_t L = g.parallelism();

  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    if (e.sign != 1 && e.sign != -1)
      out.push_back({"edge sign", {e.from, e.to}, "edge " + std::to_string(i) + " has sign " + std::to_string(e.sign)});
  }

  for (const Node& n : g.nodes()) {
    const std::size_t want = expected_inbound(n.kind);
    if (g.inbound(n.id).size() != want) {
      std::string rule = std::string(1, static_cast<char>(std::toupper(to_string(n.kind)[0]))) +
                         std::string(to_string(n.kind).substr(1)) + " arity";
      out.push_back({rule, {n.id},
                     "expected " + std::to_string(want) + " inbound edges, found " +
                         std::to_string(g.inbound(n.id).size())});
    }
    switch (n.kind) {
      case NodeKind::Output:
        if (!g.outbound(n.id).empty()) out.push_back({"Output arity", {n.id}, "output node has outbound edges"});
        break;
      case NodeKind::Delay:
        if (n.cycles == 0) out.push_back({"delay cycles", {n.id}, "delay must hold at least one block"});
        break;
      case NodeKind::Subfilter: {
        const auto& c = n.spec.combo;
        const bool bad_size = c.size() != L;
        const bool all_zero = std::all_of(c.begin(), c.end(), [](int v) { return v == 0; });
        const bool bad_entry = std::any_of(c.begin(), c.end(), [](int v) { return v < -1 || v > 1; });
        if (bad_size || all_zero || bad_entry)
          out.push_back({"subfilter combo", {n.id}, "combination '" + describe(n.spec) + "' is not a valid length-" +
                                                        std::to_string(L) + " {-1,0,1} vector"});
        break;
      }
      default:
        break;
    }
  }

  for (NodeKind kind : {NodeKind::Input, NodeKind::Output}) {
    std::vector<std::vector<NodeId>> by_port(L);
    std::vector<NodeId> stray;
    for (const Node& n : g.nodes()) {
      if (n.kind != kind) continue;
      if (n.port < L) by_port[n.port].push_back(n.id);
      else stray.push_back(n.id);
    }
    const std::string rule = kind == NodeKind::Input ? "input coverage" : "output coverage";
    if (!stray.empty()) out.push_back({rule, stray, "port index out of range"});
    for (std::size_t p = 0; p < L; ++p) {
      if (by_port[p].empty()) out.push_back({rule, {}, std::string(to_string(kind)) + " port " + std::to_string(p) + " missing"});
      else if (by_port[p].size() > 1)
        out.push_back({rule, by_port[p], std::string(to_string(kind)) + " port " + std::to_string(p) + " duplicated"});
    }
  }

  const std::vector<NodeId> order = kahn(g);
  if (order.size() != g.nodes().size()) {
    std::vector<bool> emitted(g.nodes().size(), false);
    for (NodeId v : order) emitted[v] = true;
    std::vector<NodeId> stuck;
    for (NodeId v = 0; v < emitted.size(); ++v)
      if (!emitted[v]) stuck.push_back(v);
    out.push_back({"cycle", stuck, "graph is not acyclic"});
  }

  const auto from_inputs = reach(g, NodeKind::Input, true);
  const auto to_outputs = reach(g, NodeKind::Output, false);
  std::vector<NodeId> dangling;
  for (const Node& n : g.nodes())
    if (!from_inputs[n.id] || !to_outputs[n.id]) dangling.push_back(n.id);
  if (!dangling.empty()) out.push_back({"dangling", dangling, "nodes not on any input-to-output path"});

  return out;
}

void require_valid(const StructureGraph& g) {
  const auto violations = validate(g);
  if (violations.empty()) return;
  std::string msg = "invalid structure graph:";
  for (const auto& v : violations) msg += " [" + v.rule + ": " + v.detail + "]";
  throw std::invalid_argument(msg);
}

std::vector<NodeId> topological_order(const StructureGraph& g) {
  auto order = kahn(g);
  if (order.size() != g.nodes().size()) throw std::invalid_argument("topological_order: graph has a cycle");
  return order;
}

CostReport count_costs(const StructureGraph& g) {
  require_valid(g);
  CostReport r;
  for (const Node& n : g.nodes()) {
    switch (n.kind) {
      case NodeKind::Add: ++r.additions; break;
      case NodeKind::Delay: r.delay_elements += n.cycles; break;
      case NodeKind::Subfilter:
        ++r.subfilters;
        r.multiplications += n.spec.tap_len;
        break;
      default: break;
    }
  }
  return r;
}

StructureGraph transpose_graph(const StructureGraph& g) {
  require_valid(g);
  const std::size_t L = g.parallelism();
  StructureGraph t(L, g.levels(), g.scheme());

  // Original Output port p becomes transposed Input port L-1-p.
  std::vector<Signal> flows_back(g.nodes().size());
  for (std::size_t p = 0; p < L; ++p) {
    const NodeId out_id = g.output_ports()[L - 1 - p];
    flows_back[out_id] = t.input(p);
  }

  // flows_back[v]: signal leaving v's dual toward v's producers.
  const auto order = topological_order(g);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node& v = g.node(*it);
    if (v.kind == NodeKind::Output) continue;

    std::vector<std::size_t> outs = g.outbound(v.id);
    std::sort(outs.begin(), outs.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(g.edges()[a].to, a) < std::pair(g.edges()[b].to, b);
    });
    std::optional<Signal> sum;
    for (std::size_t ei : outs) {
      const Edge& e = g.edges()[ei];
      Signal contrib = flows_back[e.to];
      if (e.sign < 0) contrib = contrib.negated();
      sum = sum ? t.add(*sum, contrib) : contrib;
    }

    switch (v.kind) {
      case NodeKind::Add: flows_back[v.id] = *sum; break;
      case NodeKind::Delay: flows_back[v.id] = t.delay(*sum, v.cycles); break;
      case NodeKind::Subfilter: flows_back[v.id] = t.subfilter(*sum, v.spec); break;
      case NodeKind::Input: t.output(L - 1 - v.port, *sum); break;
      case NodeKind::Output: break;
    }
  }
  return t;
}

StructureGraph canonical_form(const StructureGraph& g) { return transpose_graph(transpose_graph(g)); }

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  v *= 0x9E3779B97F4A7C15ULL;
  v ^= v >> 31;
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return h * 0xBF58476D1CE4E5B9ULL;
}

std::uint64_t node_label(const Node& n) {
  std::uint64_t h = mix(0, static_cast<std::uint64_t>(n.kind));
  switch (n.kind) {
    case NodeKind::Input:
    case NodeKind::Output: h = mix(h, n.port); break;
    case NodeKind::Delay: h = mix(h, n.cycles); break;
    case NodeKind::Subfilter:
      for (int c : n.spec.combo) h = mix(h, static_cast<std::uint64_t>(c + 7));
      h = mix(h, n.spec.tap_len);
      break;
    default: break;
  }
  return h;
}

/// Merkle-style hash of each node's upstream (forward) or downstream cone.
std::vector<std::uint64_t> cone_hashes(const StructureGraph& g, const std::vector<NodeId>& order, bool upstream) {
  std::vector<std::uint64_t> h(g.nodes().size());
  auto visit = [&](NodeId v) {
    std::vector<std::uint64_t> parts;
    for (std::size_t ei : upstream ? g.inbound(v) : g.outbound(v)) {
      const Edge& e = g.edges()[ei];
      parts.push_back(mix(h[upstream ? e.from : e.to], e.sign > 0 ? 1 : 2));
    }
    std::sort(parts.begin(), parts.end());
    std::uint64_t acc = node_label(g.node(v));
    for (auto p : parts) acc = mix(acc, p);
    h[v] = acc;
  };
  if (upstream)
    for (NodeId v : order) visit(v);
  else
    for (auto it = order.rbegin(); it != order.rend(); ++it) visit(*it);
  return h;
}

}  // namespace

bool isomorphic(const StructureGraph& a, const StructureGraph& b) {
  if (a.parallelism() != b.parallelism() || a.nodes().size() != b.nodes().size() ||
      a.edges().size() != b.edges().size())
    return false;
  std::vector<NodeId> oa, ob;
  try {
    oa = topological_order(a);
    ob = topological_order(b);
  } catch (const std::invalid_argument&) {
    return false;
  }
  const auto fa = cone_hashes(a, oa, true), ba = cone_hashes(a, oa, false);
  const auto fb = cone_hashes(b, ob, true), bb = cone_hashes(b, ob, false);

  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<NodeId>> classes_a, classes_b;
  for (NodeId v = 0; v < a.nodes().size(); ++v) classes_a[{fa[v], ba[v]}].push_back(v);
  for (NodeId v = 0; v < b.nodes().size(); ++v) classes_b[{fb[v], bb[v]}].push_back(v);
  if (classes_a.size() != classes_b.size()) return false;

  std::vector<NodeId> map(a.nodes().size());
  for (const auto& [key, members] : classes_a) {
    auto it = classes_b.find(key);
    if (it == classes_b.end() || it->second.size() != members.size()) return false;
    for (std::size_t i = 0; i < members.size(); ++i) map[members[i]] = it->second[i];
  }

  std::map<std::tuple<NodeId, NodeId, int>, int> edge_count;
  for (const Edge& e : b.edges()) ++edge_count[{e.from, e.to, e.sign}];
  for (const Edge& e : a.edges()) {
    auto it = edge_count.find({map[e.from], map[e.to], e.sign});
    if (it == edge_count.end() || it->second == 0) return false;
    --it->second;
  }
  for (NodeId v = 0; v < a.nodes().size(); ++v)
    if (node_label(a.node(v)) != node_label(b.node(map[v]))) return false;
  return true;
}

StructureGraph prune_dead(const StructureGraph& g) {
  auto live = reach(g, NodeKind::Output, false);
  for (const Node& n : g.nodes())
    if (n.kind == NodeKind::Input) live[n.id] = true;
  StructureGraph out(g.parallelism(), g.levels(), g.scheme());
  std::vector<NodeId> remap(g.nodes().size());
  for (const Node& n : g.nodes())
    if (live[n.id]) remap[n.id] = out.add_node(n.kind, n.port, n.cycles, n.spec);
  for (const Edge& e : g.edges())
    if (live[e.from] && live[e.to]) out.add_edge(remap[e.from], remap[e.to], e.sign);
  return out;
}

std::string export_json(const StructureGraph& g) {
  using nlohmann::json;
  json nodes = json::array();
  for (const Node& n : g.nodes()) {
    json param;
    switch (n.kind) {
      case NodeKind::Input:
      case NodeKind::Output: param = n.port; break;
      case NodeKind::Delay: param = n.cycles; break;
      case NodeKind::Subfilter: param = {{"combo", n.spec.combo}, {"tap_len", n.spec.tap_len}}; break;
      case NodeKind::Add: param = nullptr; break;
    }
    nodes.push_back({{"id", n.id}, {"kind", to_string(n.kind)}, {"param", param}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"from", e.from}, {"to", e.to}, {"sign", e.sign}});
  json doc = {{"schema", kNetlistSchema}, {"L", g.parallelism()}, {"n", g.levels()},
              {"scheme", g.scheme()},     {"nodes", nodes},          {"edges", edges}};
  return doc.dump(2) + "\n";
}

namespace {

NodeKind parse_kind(const std::string& s) {
  for (NodeKind k : {NodeKind::Input, NodeKind::Output, NodeKind::Add, NodeKind::Delay, NodeKind::Subfilter})
    if (to_string(k) == s) return k;
  throw FormatError("unknown node kind '" + s + "'");
}

std::size_t non_negative(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number_integer()) throw FormatError(what + " must be an integer");
  const auto value = v.get<long long>();
  if (value < 0) throw FormatError(what + " must be non-negative, got " + std::to_string(value));
  return static_cast<std::size_t>(value);
}

}  // namespace

StructureGraph import_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed netlist JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("netlist must be a JSON object");
  if (!doc.contains("schema") || doc["schema"] != kNetlistSchema)
    throw FormatError("netlist schema mismatch: expected '" + std::string(kNetlistSchema) + "'");
  for (const char* key : {"L", "n", "nodes", "edges"})
    if (!doc.contains(key)) throw FormatError(std::string("netlist missing field '") + key + "'");
  const std::size_t L = non_negative(doc["L"], "L");
  if (L == 0) throw FormatError("L must be positive");
  StructureGraph g(L, non_negative(doc["n"], "n"), doc.value("scheme", std::string{}));

  if (!doc["nodes"].is_array() || !doc["edges"].is_array()) throw FormatError("nodes/edges must be arrays");
  std::map<std::size_t, const json*> by_id;
  for (const json& n : doc["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n.contains("kind")) throw FormatError("node needs id and kind");
    if (!by_id.emplace(non_negative(n["id"], "node id"), &n).second) throw FormatError("duplicate node id");
  }
  std::map<std::size_t, NodeId> remap;
  try {
    for (const auto& [id, n] : by_id) {
      const NodeKind kind = parse_kind((*n)["kind"].get<std::string>());
      const json param = n->value("param", json());
      NodeId new_id = 0;
      switch (kind) {
        case NodeKind::Input:
        case NodeKind::Output: new_id = g.add_node(kind, non_negative(param, "port")); break;
        case NodeKind::Delay: {
          const std::size_t cycles = non_negative(param, "delay cycles");
          if (cycles == 0) throw FormatError("delay cycles must be positive");
          new_id = g.add_node(kind, 0, cycles);
          break;
        }
        case NodeKind::Subfilter: {
          SubfilterSpec spec;
          spec.combo = param.at("combo").get<std::vector<int>>();
          spec.tap_len = param.contains("tap_len") ? non_negative(param["tap_len"], "tap_len") : 0;
          new_id = g.add_node(kind, 0, 0, std::move(spec));
          break;
        }
        case NodeKind::Add: new_id = g.add_node(kind); break;
      }
      remap[id] = new_id;
    }
    for (const json& e : doc["edges"]) {
      const auto from = remap.find(non_negative(e.at("from"), "edge from"));
      const auto to = remap.find(non_negative(e.at("to"), "edge to"));
      if (from == remap.end() || to == remap.end()) throw FormatError("edge references unknown node");
      const int sign = e.value("sign", 1);
      if (sign != 1 && sign != -1) throw FormatError("edge sign must be +1 or -1");
      g.add_edge(from->second, to->second, sign);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed netlist: ") + e.what());
  }
  try {
    require_valid(g);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return g;
}

std::string export_dot(const StructureGraph& g) {
  std::ostringstream os;
  os << "digraph ffa {\n  rankdir=LR;\n  label=\"" << g.scheme() << " L=" << g.parallelism() << "\";\n";
  for (const Node& n : g.nodes()) {
    os << "  n" << n.id << " [";
    switch (n.kind) {
      case NodeKind::Input: os << "shape=invhouse, label=\"x" << n.port << "\""; break;
      case NodeKind::Output: os << "shape=house, label=\"y" << n.port << "\""; break;
      case NodeKind::Add: os << "shape=circle, label=\"+\""; break;
      case NodeKind::Delay:
        os << "shape=square, style=filled, fillcolor=lightgrey, label=\"D";
        if (n.cycles != 1) os << n.cycles;
        os << "\"";
        break;
      case NodeKind::Subfilter: os << "shape=box, style=rounded, label=\"" << describe(n.spec) << "\""; break;
    }
    os << "];\n";
  }
  for (const Edge& e : g.edges()) {
    os << "  n" << e.from << " -> n" << e.to;
    if (e.sign < 0) os << " [label=\"-\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ffa
