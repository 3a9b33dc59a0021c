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

#ifndef QGERM_TRANSPILE_HPP
#define QGERM_TRANSPILE_HPP

#include <optional>
#include <set>

#include "qgerm/circuit.hpp"

namespace qgerm {

inline DenseOperator u_tele() {
  return DenseOperator(SpaceShape({2, 2}), gates::u_tele());
}

/// The teleportation circuit: one qubit in, one qubit out, no directed
/// quantum path between them. Wiring:
///
///   in ----------------- U(port0) --m--> (bit) --> cX control
///   0 -> Uinv(port0) ------------------------------ cZ -> cX -> out
///   0 -> Uinv(port1) --- U(port1) --m--> (bit) --> cZ control
///
/// Uinv creates the Bell pair from |00>; U is a CNOT followed by a Hadamard
/// on its second input.
struct GadgetTemplate {
  MixedCircuit circuit;
  Endpoint in_port;   // the boundary input qubit port
  Endpoint out_port;  // the boundary output qubit port
  // The gadget's 8 qubit edges for multi-Pauli accounting: the input edge
  // plus the 7 internal ones. The output edge stands in for the next
  // original edge and is excluded.
  std::vector<EdgeId> pauli_edges;
};

inline GadgetTemplate teleport_gadget() {
  GadgetTemplate g;
  MixedCircuit& c = g.circuit;
  c.name = "teleport-gadget";
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  NodeId z1 = c.add_node(InitZero{});
  NodeId z2 = c.add_node(InitZero{});
  NodeId uinv = c.add_node(UnitaryGate{2, 0, gates::u_tele_inv(), "U_TELE_INV"});
  NodeId u = c.add_node(UnitaryGate{2, 0, gates::u_tele(), "U_TELE"});
  NodeId mx = c.add_node(MeasureZ{});
  NodeId mz = c.add_node(MeasureZ{});
  NodeId cz = c.add_node(UnitaryGate{1, 1, gates::pauli(3), "Z"});
  NodeId cx = c.add_node(UnitaryGate{1, 1, gates::pauli(1), "X"});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit}});

  EdgeId e_in = c.add_edge({in, 0}, {u, 0}, EdgeKind::Qubit);
  EdgeId e1 = c.add_edge({z1, 0}, {uinv, 0}, EdgeKind::Qubit);
  EdgeId e2 = c.add_edge({z2, 0}, {uinv, 1}, EdgeKind::Qubit);
  EdgeId e3 = c.add_edge({uinv, 0}, {cz, 1}, EdgeKind::Qubit);
  EdgeId e4 = c.add_edge({uinv, 1}, {u, 1}, EdgeKind::Qubit);
  EdgeId e5 = c.add_edge({u, 0}, {mx, 0}, EdgeKind::Qubit);
  EdgeId e6 = c.add_edge({u, 1}, {mz, 0}, EdgeKind::Qubit);
  EdgeId e7 = c.add_edge({cz, 0}, {cx, 1}, EdgeKind::Qubit);
  c.add_edge({mz, 0}, {cz, 0}, EdgeKind::Bit);
  c.add_edge({mx, 0}, {cx, 0}, EdgeKind::Bit);
  c.add_edge({cx, 0}, {out, 0}, EdgeKind::Qubit);

  g.in_port = {in, 0};
  g.out_port = {out, 0};
  g.pauli_edges = {e_in, e1, e2, e3, e4, e5, e6, e7};
  return g;
}

/// Replaces the selected qubit edges of `c` (all of them by default) with
/// teleportation gadgets. Each replaced edge keeps its identity as the
/// gadget's input wire; the gadget contributes 8 new qubit edges and 2 new
/// bit edges per replaced edge, and the rewritten circuit has quantum depth
/// at most 6.
inline MixedCircuit insert_teleport(
    const MixedCircuit& input,
    const std::optional<std::set<EdgeId>>& only_edges = std::nullopt) {
  require_valid(input);
  MixedCircuit c = input;
  NodeId node_id = c.next_node_id();
  EdgeId edge_id = c.next_edge_id();

  if (only_edges)
    for (EdgeId id : *only_edges)
      if (c.edge(id).kind != EdgeKind::Qubit)
        throw Error("insert_teleport: edge " + std::to_string(id) +
                    " is not a qubit edge");
  std::vector<size_t> selected;
  for (size_t i = 0; i < c.edges.size(); ++i) {
    const Edge& e = c.edges[i];
    if (e.kind != EdgeKind::Qubit) continue;
    if (only_edges && !only_edges->count(e.id)) continue;
    selected.push_back(i);
  }
  for (size_t i : selected) {
    Endpoint old_dst = c.edges[i].to;
    NodeId z1 = node_id++, z2 = node_id++, uinv = node_id++, u = node_id++,
           mx = node_id++, mz = node_id++, cz = node_id++, cx = node_id++;
    c.nodes.push_back(Node{z1, InitZero{}});
    c.nodes.push_back(Node{z2, InitZero{}});
    c.nodes.push_back(
        Node{uinv, UnitaryGate{2, 0, gates::u_tele_inv(), "U_TELE_INV"}});
    c.nodes.push_back(Node{u, UnitaryGate{2, 0, gates::u_tele(), "U_TELE"}});
    c.nodes.push_back(Node{mx, MeasureZ{}});
    c.nodes.push_back(Node{mz, MeasureZ{}});
    c.nodes.push_back(Node{cz, UnitaryGate{1, 1, gates::pauli(3), "Z"}});
    c.nodes.push_back(Node{cx, UnitaryGate{1, 1, gates::pauli(1), "X"}});

    c.edges[i].to = {u, 0};  // original edge now feeds the gadget
    auto add = [&](Endpoint from, Endpoint to, EdgeKind kind) {
      c.edges.push_back(Edge{edge_id++, from, to, kind});
    };
    add({z1, 0}, {uinv, 0}, EdgeKind::Qubit);
    add({z2, 0}, {uinv, 1}, EdgeKind::Qubit);
    add({uinv, 0}, {cz, 1}, EdgeKind::Qubit);
    add({uinv, 1}, {u, 1}, EdgeKind::Qubit);
    add({u, 0}, {mx, 0}, EdgeKind::Qubit);
    add({u, 1}, {mz, 0}, EdgeKind::Qubit);
    add({cz, 0}, {cx, 1}, EdgeKind::Qubit);
    add({mz, 0}, {cz, 0}, EdgeKind::Bit);
    add({mx, 0}, {cx, 0}, EdgeKind::Bit);
    add({cx, 0}, old_dst, EdgeKind::Qubit);
  }
  return c;
}

inline MixedCircuit insert_teleport_everywhere(const MixedCircuit& c) {
  return insert_teleport(c);
}

/// Splices a single-qubit unitary into a qubit edge (used to inject Pauli
/// errors for the gadget push-through analysis).
inline MixedCircuit insert_gate_on_edge(const MixedCircuit& input, EdgeId edge,
                                        const Matrix& m,
                                        const std::string& name = "") {
  MixedCircuit c = input;
  NodeId node = c.next_node_id();
  EdgeId eid = c.next_edge_id();
  for (Edge& e : c.edges) {
    if (e.id != edge) continue;
    if (e.kind != EdgeKind::Qubit)
      throw Error("insert_gate_on_edge: not a qubit edge");
    Endpoint old_dst = e.to;
    c.nodes.push_back(Node{node, UnitaryGate{1, 0, m, name}});
    e.to = {node, 0};
    c.edges.push_back(Edge{eid, {node, 0}, old_dst, EdgeKind::Qubit});
    return c;
  }
  throw Error("insert_gate_on_edge: unknown edge id");
}

}  // namespace qgerm

#endif  // QGERM_TRANSPILE_HPP
