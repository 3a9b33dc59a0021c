// Copyright 2026 The qgerm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QGERM_CIRCUIT_HPP
#define QGERM_CIRCUIT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qgerm/gates.hpp"
#include "qgerm/linalg.hpp"

namespace qgerm {

using NodeId = int;
using EdgeId = int;

enum class EdgeKind : uint8_t { Qubit, Bit };

// ---------------------------------------------------------------------------
// Gate kinds
// ---------------------------------------------------------------------------

/// Boundary pseudo-node supplying the circuit's typed inputs. Its ports are
/// output ports.
struct InputNode {
  std::vector<EdgeKind> ports;
};

/// Boundary pseudo-node consuming the circuit's typed outputs. Its ports are
/// input ports.
struct OutputNode {
  std::vector<EdgeKind> ports;
};

/// Creates a fresh qubit in |0>.
struct InitZero {};

///// Computational-basis measurement: one qubit in, one bit out.
struct MeasureZ {};

/// Total deterministic function {0,1}^a -> {0,1}^b. Input port i is bit i of
/// the table index; bit j of a table entry feeds output port j. COPY is the
/// special case a=1, b=2, table={0b00, 0b11}.
struct ClassicalDet {
  int n_in = 0;
  int n_out = 0;
  std::vector<uint32_t> table;
};

///// Unitary on `qubits` qubits with `controls` classical control bits: the
/// matrix is applied iff all control bits are 1. Input ports 0..controls-1
/// are bits, the rest qubits; matrix factor i matches qubit input port
/// controls+i and output port i.
struct UnitaryGate {
  int qubits = 1;
  int controls = 0;
  Matrix matrix;
  std::string name;  // builtin name when applicable, for round-tripping
};

using GateKind = std::variant<InputNode, OutputNode, InitZero, MeasureZ,
                              ClassicalDet, UnitaryGate>;

struct Node {
  NodeId id = 0;
  GateKind kind;
};

struct Endpoint {
  NodeId node = 0;
  int port = 0;
  bool operator==(const Endpoint& o) const {
    return node == o.node && port == o.port;
  }
};

struct Edge {
  EdgeId id = 0;
  Endpoint from;
  Endpoint to;
  EdgeKind kind = EdgeKind::Qubit;
};

// ---------------------------------------------------------------------------
// Port typing helpers
// ---------------------------------------------------------------------------

inline int num_input_ports(const GateKind& k) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, InputNode>) return 0;
        if constexpr (std::is_same_v<T, OutputNode>)
          return static_cast<int>(g.ports.size());
        if constexpr (std::is_same_v<T, InitZero>) return 0;
        if constexpr (std::is_same_v<T, MeasureZ>) return 1;
        if constexpr (std::is_same_v<T, ClassicalDet>) return g.n_in;
        if constexpr (std::is_same_v<T, UnitaryGate>)
          return g.controls + g.qubits;
      },
      k);
}

inline int num_output_ports(const GateKind& k) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, InputNode>)
          return static_cast<int>(g.ports.size());
        if constexpr (std::is_same_v<T, OutputNode>) return 0;
        if constexpr (std::is_same_v<T, InitZero>) return 1;
        if constexpr (std::is_same_v<T, MeasureZ>) return 1;
        if constexpr (std::is_same_v<T, ClassicalDet>) return g.n_out;
        if constexpr (std::is_same_v<T, UnitaryGate>) return g.qubits;
      },
      k);
}

inline EdgeKind input_port_kind(const GateKind& k, int port) {
  return std::visit(
      [port](const auto& g) -> EdgeKind {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, OutputNode>) return g.ports[port];
        if constexpr (std::is_same_v<T, MeasureZ>) return EdgeKind::Qubit;
        if constexpr (std::is_same_v<T, ClassicalDet>) return EdgeKind::Bit;
        if constexpr (std::is_same_v<T, UnitaryGate>)
          return port < g.controls ? EdgeKind::Bit : EdgeKind::Qubit;
        throw Error("node kind has no input ports");
      },
      k);
}

inline EdgeKind output_port_kind(const GateKind& k, int port) {
  return std::visit(
      [port](const auto& g) -> EdgeKind {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, InputNode>) return g.ports[port];
        if constexpr (std::is_same_v<T, InitZero>) return EdgeKind::Qubit;
        if constexpr (std::is_same_v<T, MeasureZ>) return EdgeKind::Bit;
        if constexpr (std::is_same_v<T, ClassicalDet>) return EdgeKind::Bit;
        if constexpr (std::is_same_v<T, UnitaryGate>) return EdgeKind::Qubit;
        throw Error("node kind has no output ports");
      },
      k);
}

// ---------------------------------------------------------------------------
// MixedCircuit
// ---------------------------------------------------------------------------

struct MixedCircuit {
  std::string name;
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  NodeId add_node(GateKind kind) {
    NodeId id = next_node_id();
    nodes.push_back(Node{id, std::move(kind)});
    return id;
  }

  EdgeId add_edge(Endpoint from, Endpoint to, EdgeKind kind) {
    EdgeId id = next_edge_id();
    edges.push_back(Edge{id, from, to, kind});
    return id;
  }

  NodeId next_node_id() const {
    NodeId id = 0;
    for (const Node& n : nodes) id = std::max(id, n.id + 1);
    return id;
  }
  EdgeId next_edge_id() const {
    EdgeId id = 0;
    for (const Edge& e : edges) id = std::max(id, e.id + 1);
    return id;
  }

  const Node* find_node(NodeId id) const {
    for (const Node& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const Node& node(NodeId id) const {
    const Node* n = find_node(id);
    if (!n) throw Error("unknown node id " + std::to_string(id));
    return *n;
  }
  const Edge& edge(EdgeId id) const {
    for (const Edge& e : edges)
      if (e.id == id) return e;
    throw Error("unknown edge id " + std::to_string(id));
  }

  int count_edges(EdgeKind kind) const {
    int n = 0;
    for (const Edge& e : edges) n += (e.kind == kind);
    return n;
  }
  int qubit_edge_count() const { return count_edges(EdgeKind::Qubit); }
  int bit_edge_count() const { return count_edges(EdgeKind::Bit); }

  /// Input-node qubit ports in (node id, port) order; these define the
  /// factor order of circuit input states.
  std::vector<Endpoint> input_qubit_ports() const {
    return boundary_ports<InputNode>(EdgeKind::Qubit);
  }
  std::vector<Endpoint> input_bit_ports() const {
    return boundary_ports<InputNode>(EdgeKind::Bit);
  }
  std::vector<Endpoint> output_qubit_ports() const {
    return boundary_ports<OutputNode>(EdgeKind::Qubit);
  }
  std::vector<Endpoint> output_bit_ports() const {
    return boundary_ports<OutputNode>(EdgeKind::Bit);
  }

 private:
  template <typename Boundary>
  std::vector<Endpoint> boundary_ports(EdgeKind kind) const {
    std::vector<Endpoint> out;
    std::vector<const Node*> sorted;
    for (const Node& n : nodes)
      if (std::holds_alternative<Boundary>(n.kind)) sorted.push_back(&n);
    std::sort(sorted.begin(), sorted.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });
    for (const Node* n : sorted) {
      const auto& ports = std::get<Boundary>(n->kind).ports;
      for (int p = 0; p < static_cast<int>(ports.size()); ++p)
        if (ports[p] == kind) out.push_back(Endpoint{n->id, p});
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
/// Validation: violations are data, not faults.
// ---------------------------------------------------------------------------

struct Violation {
  std::string code;     // "cycle", "edge-kind mismatch", ...
  std::string message;  // human-readable, with node/edge locations
};

namespace detail {

inline std::map<NodeId, std::vector<const Edge*>> in_edges_by_node(
    const MixedCircuit& c) {
  std::map<NodeId, std::vector<const Edge*>> m;
  for (const Edge& e : c.edges) m[e.to.node].push_back(&e);
  return m;
}

inline std::map<NodeId, std::vector<const Edge*>> out_edges_by_node(
    const MixedCircuit& c) {
  std::map<NodeId, std::vector<const Edge*>> m;
  for (const Edge& e : c.edges) m[e.from.node].push_back(&e);
  return m;
}

/// Node ids in a topological order (Kahn). Throws if the graph has a cycle.
inline std::vector<NodeId> topological_order(const MixedCircuit& c) {
  std::map<NodeId, int> indegree;
  for (const Node& n : c.nodes) indegree[n.id] = 0;
  for (const Edge& e : c.edges) indegree[e.to.node]++;
  // Ties broken by ascending node id for determinism.
  std::vector<NodeId> ready;
  for (auto& [id, deg] : indegree)
    if (deg == 0) ready.push_back(id);
  auto out_by = out_edges_by_node(c);
  std::vector<NodeId> order;
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), std::greater<>());
    NodeId id = ready.back();
    ready.pop_back();
    order.push_back(id);
    for (const Edge* e : out_by[id])
      if (--indegree[e->to.node] == 0) ready.push_back(e->to.node);
  }
  if (order.size() != c.nodes.size()) throw Error("circuit has a cycle");
  return order;
}

}  // namespace detail

inline std::vector<Violation> validate(const MixedCircuit& c) {
  std::vector<Violation> out;
  auto bad = [&](std::string code, std::string msg) {
    out.push_back(Violation{std::move(code), std::move(msg)});
  };

  std::map<NodeId, const Node*> by_id;
  for (const Node& n : c.nodes) {
    if (by_id.count(n.id))
      bad("duplicate-node", "node id " + std::to_string(n.id) + " reused");
    by_id[n.id] = &n;
    if (const auto* u = std::get_if<UnitaryGate>(&n.kind)) {
      Index want = Index(1) << u->qubits;
      if (u->matrix.rows() != want || u->matrix.cols() != want)
        bad("matrix-size", "node " + std::to_string(n.id) +
                               ": matrix is not 2^qubits square");
      else if (!DenseOperator(SpaceShape({want}), u->matrix).is_unitary())
        bad("non-unitary", "node " + std::to_string(n.id) +
                               ": matrix fails the unitarity check");
      if (u->qubits < 1 || u->controls < 0)
        bad("arity", "node " + std::to_string(n.id) + ": bad unitary arity");
    } else if (const auto* cl = std::get_if<ClassicalDet>(&n.kind)) {
      if (cl->n_in < 0 || cl->n_out < 0 ||
          cl->table.size() != (size_t(1) << cl->n_in))
        bad("table-size", "node " + std::to_string(n.id) +
                              ": table must have 2^inputs entries");
      else
        for (uint32_t v : cl->table)
          if (cl->n_out < 32 && v >= (uint32_t(1) << cl->n_out)) {
            bad("table-range", "node " + std::to_string(n.id) +
                                   ": table entry out of output range");
            break;
          }
    }
  }

  // Every port used exactly once; qubit fan-out 1 follows.
  std::map<NodeId, std::vector<int>> in_use, out_use;
  for (const Node& n : c.nodes) {
    in_use[n.id].assign(std::max(0, num_input_ports(n.kind)), 0);
    out_use[n.id].assign(std::max(0, num_output_ports(n.kind)), 0);
  }
  for (const Edge& e : c.edges) {
    auto describe = [&] { return "edge " + std::to_string(e.id); };
    const Node* from = by_id.count(e.from.node) ? by_id[e.from.node] : nullptr;
    const Node* to = by_id.count(e.to.node) ? by_id[e.to.node] : nullptr;
    if (!from || !to) {
      bad("dangling-edge", describe() + " references an unknown node");
      continue;
    }
    if (e.from.port < 0 || e.from.port >= num_output_ports(from->kind)) {
      bad("port-range", describe() + " source port out of range");
      continue;
    }
    if (e.to.port < 0 || e.to.port >= num_input_ports(to->kind)) {
      bad("port-range", describe() + " destination port out of range");
      continue;
    }
    if (++out_use[from->id][e.from.port] > 1)
      bad("port-reuse", describe() + " reuses an output port (qubit fan-out "
                                     "is 1; copy bits with a COPY gate)");
    if (++in_use[to->id][e.to.port] > 1)
      bad("port-reuse", describe() + " reuses an input port");
    if (output_port_kind(from->kind, e.from.port) != e.kind ||
        input_port_kind(to->kind, e.to.port) != e.kind)
      bad("edge-kind mismatch",
          describe() + " kind does not match its endpoint ports");
  }
  for (auto& [id, uses] : in_use)
    for (size_t p = 0; p < uses.size(); ++p)
      if (uses[p] == 0)
        bad("unconnected-port", "node " + std::to_string(id) + " input port " +
                                    std::to_string(p) + " unconnected");
  for (auto& [id, uses] : out_use)
    for (size_t p = 0; p < uses.size(); ++p)
      if (uses[p] == 0)
        bad("unconnected-port", "node " + std::to_string(id) +
                                    " output port " + std::to_string(p) +
                                    " unconnected");

  try {
    detail::topological_order(c);
  } catch (const Error&) {
    bad("cycle", "circuit graph contains a directed cycle");
  }
  return out;
}

inline void require_valid(const MixedCircuit& c) {
  auto v = validate(c);
  if (!v.empty())
    throw Error("invalid circuit '" + c.name + "': " + v.front().code + ": " +
                v.front().message);
}

// ---------------------------------------------------------------------------
// Depth
// ---------------------------------------------------------------------------

struct DepthReport {
  int total_depth = 0;    // edge count of the longest directed path
  int quantum_depth = 0;  // same, following only qubit edges
};

inline DepthReport depth(const MixedCircuit& c) {
  require_valid(c);
  auto order = detail::topological_order(c);
  auto in_by = detail::in_edges_by_node(c);
  std::map<NodeId, int> dist, qdist;
  DepthReport report;
  for (NodeId id : order) {
    int d = 0, q = 0;
    for (const Edge* e : in_by[id]) {
      d = std::max(d, dist[e->from.node] + 1);
      if (e->kind == EdgeKind::Qubit) q = std::max(q, qdist[e->from.node] + 1);
    }
    dist[id] = d;
    qdist[id] = q;
    report.total_depth = std::max(report.total_depth, d);
    report.quantum_depth = std::max(report.quantum_depth, q);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Quantum-subgraph connectivity
// ---------------------------------------------------------------------------

enum class Connectivity { None, Weak, Strong };

namespace detail {

// Port-aware reachability between two qubit edges, directed or undirected.
// Edges are adjacent when they meet at a non-boundary node: the boundary
// Input/Output nodes carry independent wires and must not couple their
// ports.
inline bool qubit_reachable(const MixedCircuit& c, EdgeId from, EdgeId to,
                            bool directed) {
  auto interior = [&](NodeId id) {
    const Node& n = c.node(id);
    return !std::holds_alternative<InputNode>(n.kind) &&
           !std::holds_alternative<OutputNode>(n.kind);
  };
  std::vector<EdgeId> frontier{from};
  std::map<EdgeId, bool> seen{{from, true}};
  while (!frontier.empty()) {
    const Edge& cur = c.edge(frontier.back());
    frontier.pop_back();
    if (cur.id == to) return true;
    for (const Edge& e : c.edges) {
      if (e.kind != EdgeKind::Qubit || seen[e.id]) continue;
      bool forward = e.from.node == cur.to.node && interior(cur.to.node);
      bool backward =
          !directed && ((e.to.node == cur.from.node && interior(cur.from.node)) ||
                        (e.to.node == cur.to.node && interior(cur.to.node)) ||
                        (e.from.node == cur.from.node && interior(cur.from.node)));
      if (forward || backward) {
        seen[e.id] = true;
        frontier.push_back(e.id);
      }
    }
  }
  return false;
}

// The unique qubit edge attached to a boundary port.
inline EdgeId boundary_edge(const MixedCircuit& c, Endpoint port, bool input) {
  for (const Edge& e : c.edges) {
    const Endpoint& p = input ? e.from : e.to;
    if (p.node == port.node && p.port == port.port) return e.id;
  }
  throw Error("quantum_connectivity: boundary port is not connected");
}

}  // namespace detail

/// Connectivity between a qubit input boundary port and a qubit output
/// boundary port within the quantum subgraph.
inline Connectivity quantum_connectivity(const MixedCircuit& c,
                                         Endpoint in_port, Endpoint out_port) {
  const Node& in_node = c.node(in_port.node);
  const Node& out_node = c.node(out_port.node);
  if (!std::holds_alternative<InputNode>(in_node.kind) ||
      output_port_kind(in_node.kind, in_port.port) != EdgeKind::Qubit)
    throw Error("quantum_connectivity: not a qubit input boundary port");
  if (!std::holds_alternative<OutputNode>(out_node.kind) ||
      input_port_kind(out_node.kind, out_port.port) != EdgeKind::Qubit)
    throw Error("quantum_connectivity: not a qubit output boundary port");
  EdgeId start = detail::boundary_edge(c, in_port, true);
  EdgeId goal = detail::boundary_edge(c, out_port, false);
  if (detail::qubit_reachable(c, start, goal, true))
    return Connectivity::Strong;
  if (detail::qubit_reachable(c, start, goal, false))
    return Connectivity::Weak;
  return Connectivity::None;
}

// ---------------------------------------------------------------------------
// SQCL / AQCL shape classification
// ---------------------------------------------------------------------------

enum class LayerClass { SQCL, AQCL, Unbounded };

/// AQCL(b): every maximal directed qubit path has at most b edges.
///// SQCL(b): additionally, under longest-path (earliest) scheduling all qubit
/// edges fall into disjoint time windows of width b.
inline LayerClass classify_layers(const MixedCircuit& c, int b) {
  require_valid(c);
  if (b < 0) throw Error("classify_layers: bound must be >= 0");
  if (depth(c).quantum_depth > b) return LayerClass::Unbounded;

  // Longest-path time coordinate per node, over all edges.
  auto order = detail::topological_order(c);
  auto in_by = detail::in_edges_by_node(c);
  std::map<NodeId, int> t;
  for (NodeId id : order) {
    int d = 0;
    for (const Edge* e : in_by[id]) d = std::max(d, t[e->from.node] + 1);
    t[id] = d;
  }
  struct Span {
    int start, end;
  };
  std::vector<Span> spans;
  for (const Edge& e : c.edges)
    if (e.kind == EdgeKind::Qubit)
      spans.push_back(Span{t[e.from.node], t[e.to.node]});
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  int window_start = 0;
  bool open = false;
  for (const Span& s : spans) {
    if (!open || s.start >= window_start + b) {
      window_start = s.start;
      open = true;
    }
    if (s.end > window_start + b) return LayerClass::AQCL;
  }
  return LayerClass::SQCL;
}

}  // namespace qgerm

#endif  // QGERM_CIRCUIT_HPP
