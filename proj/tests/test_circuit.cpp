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

#include <catch2/catch_amalgamated.hpp>

#include "qgerm/circuit.hpp"
#include "qgerm/transpile.hpp"
#include "support/helpers.hpp"

using namespace qgerm;

namespace {

bool has_violation(const MixedCircuit& c, const std::string& code) {
  for (const Violation& v : validate(c))
    if (v.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("wire depth counts edges") {
  MixedCircuit c = testing::make_wire(10);
  DepthReport d = depth(c);
  CHECK(d.total_depth == 10);
  CHECK(d.quantum_depth == 10);
  CHECK(c.qubit_edge_count() == 10);
  CHECK(c.bit_edge_count() == 0);
}

TEST_CASE("measurement circuit depth splits total and quantum") {
  MixedCircuit c = testing::make_measure_circuit();
  DepthReport d = depth(c);
  CHECK(d.total_depth == 3);  // in -> H -> measure -> out(bit)
  CHECK(d.quantum_depth == 2);
}

TEST_CASE("classical-only circuit has quantum depth 0") {
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Bit}});
  NodeId f = c.add_node(ClassicalDet{1, 1, {1, 0}});  // NOT
  NodeId out = c.add_node(OutputNode{{EdgeKind::Bit}});
  c.add_edge({in, 0}, {f, 0}, EdgeKind::Bit);
  c.add_edge({f, 0}, {out, 0}, EdgeKind::Bit);
  CHECK(validate(c).empty());
  CHECK(depth(c).quantum_depth == 0);
  CHECK(depth(c).total_depth == 2);
}

TEST_CASE("validate accepts the stock circuits") {
  CHECK(validate(testing::make_wire(3)).empty());
  CHECK(validate(testing::make_bell_prep()).empty());
  CHECK(validate(testing::make_cnot_circuit()).empty());
  CHECK(validate(teleport_gadget().circuit).empty());
}

TEST_CASE("validate flags edge kind mismatches") {
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  NodeId m = c.add_node(MeasureZ{});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Bit}});
  c.add_edge({in, 0}, {m, 0}, EdgeKind::Bit);  // qubit port fed by bit edge
  c.add_edge({m, 0}, {out, 0}, EdgeKind::Bit);
  CHECK_FALSE(validate(c).empty());
}

TEST_CASE("validate flags dangling and reused ports") {
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit}});
  c.add_edge({in, 0}, {out, 0}, EdgeKind::Qubit);
  c.add_edge({in, 0}, {out, 0}, EdgeKind::Qubit);  // both endpoints reused
  CHECK_FALSE(validate(c).empty());

  MixedCircuit d;
  NodeId in2 = d.add_node(InputNode{{EdgeKind::Qubit}});
  d.add_node(OutputNode{{EdgeKind::Qubit}});
  (void)in2;  // output port never connected
  CHECK_FALSE(validate(d).empty());
}

TEST_CASE("validate flags cycles") {
  MixedCircuit c;
  NodeId a = c.add_node(UnitaryGate{1, 0, gates::identity(2), "I"});
  NodeId b = c.add_node(UnitaryGate{1, 0, gates::identity(2), "I"});
  c.add_edge({a, 0}, {b, 0}, EdgeKind::Qubit);
  c.add_edge({b, 0}, {a, 0}, EdgeKind::Qubit);
  CHECK(has_violation(c, "cycle"));
}

TEST_CASE("validate flags non-unitary gate matrices") {
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 2;
  NodeId g = c.add_node(UnitaryGate{1, 0, bad, ""});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit}});
  c.add_edge({in, 0}, {g, 0}, EdgeKind::Qubit);
  c.add_edge({g, 0}, {out, 0}, EdgeKind::Qubit);
  CHECK_FALSE(validate(c).empty());
}

TEST_CASE("validate flags bad classical tables") {
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Bit}});
  // Table too short for one input bit.
  NodeId f = c.add_node(ClassicalDet{1, 1, {0}});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Bit}});
  c.add_edge({in, 0}, {f, 0}, EdgeKind::Bit);
  c.add_edge({f, 0}, {out, 0}, EdgeKind::Bit);
  CHECK_FALSE(validate(c).empty());
}

TEST_CASE("topological order is deterministic and respects edges") {
  MixedCircuit c = testing::make_bell_prep();
  auto order = detail::topological_order(c);
  std::map<NodeId, size_t> pos;
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (const Edge& e : c.edges) CHECK(pos[e.from.node] < pos[e.to.node]);
  CHECK(order == detail::topological_order(c));
}

TEST_CASE("gadget connectivity from input to output is weak") {
  GadgetTemplate g = teleport_gadget();
  Connectivity conn =
      quantum_connectivity(g.circuit, g.in_port, g.out_port);
  CHECK(conn == Connectivity::Weak);
}

TEST_CASE("wire connectivity is strong, disjoint pairs are none") {
  MixedCircuit c = testing::make_wire(3);
  auto ins = c.input_qubit_ports();
  auto outs = c.output_qubit_ports();
  CHECK(quantum_connectivity(c, ins[0], outs[0]) == Connectivity::Strong);

  // Two parallel wires: cross pairs are not connected at all.
  MixedCircuit two;
  NodeId in = two.add_node(InputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  NodeId out = two.add_node(OutputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  two.add_edge({in, 0}, {out, 0}, EdgeKind::Qubit);
  two.add_edge({in, 1}, {out, 1}, EdgeKind::Qubit);
  auto i2 = two.input_qubit_ports();
  auto o2 = two.output_qubit_ports();
  CHECK(quantum_connectivity(two, i2[0], o2[1]) == Connectivity::None);
}

TEST_CASE("layer classification") {
  MixedCircuit wire = testing::make_wire(10);
  CHECK(classify_layers(wire, 9) == LayerClass::Unbounded);
  CHECK(classify_layers(wire, 10) == LayerClass::SQCL);

  MixedCircuit transpiled = insert_teleport_everywhere(wire);
  CHECK(depth(transpiled).quantum_depth <= 6);
  CHECK(classify_layers(transpiled, 6) == LayerClass::AQCL);
}

TEST_CASE("boundary ports are sorted and typed") {
  MixedCircuit c = testing::make_measure_circuit();
  CHECK(c.input_qubit_ports().size() == 1);
  CHECK(c.input_bit_ports().empty());
  CHECK(c.output_qubit_ports().empty());
  CHECK(c.output_bit_ports().size() == 1);
}
