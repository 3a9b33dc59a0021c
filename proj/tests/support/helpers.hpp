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

#ifndef QGERM_TESTS_SUPPORT_HELPERS_HPP
#define QGERM_TESTS_SUPPORT_HELPERS_HPP

#include <random>
#include <string>

#include "qgerm/circuit.hpp"
#include "qgerm/gates.hpp"

namespace qgerm::testing {

#ifndef QGERM_FIXTURE_DIR
#define QGERM_FIXTURE_DIR "fixtures"
#endif

inline std::string fixture_path(const std::string& name) {
  return std::string(QGERM_FIXTURE_DIR) + "/" + name;
}

/// Single qubit threaded through n-1 one-qubit gates: n qubit edges,
/// quantum depth n.
inline MixedCircuit make_wire(int n, const std::string& gate = "I") {
  MixedCircuit c;
  c.name = "wire" + std::to_string(n);
  NodeId prev = c.add_node(InputNode{{EdgeKind::Qubit}});
  for (int i = 1; i < n; ++i) {
    NodeId g = c.add_node(UnitaryGate{1, 0, *gates::builtin(gate), gate});
    c.add_edge({prev, 0}, {g, 0}, EdgeKind::Qubit);
    prev = g;
  }
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit}});
  c.add_edge({prev, 0}, {out, 0}, EdgeKind::Qubit);
  return c;
}

/// |00> -> Bell pair: H on the first qubit, then CNOT controlled by it.
/// With CNOT|x,y> = |x XOR y, y>, the control is matrix factor 1.
inline MixedCircuit make_bell_prep() {
  MixedCircuit c;
  c.name = "bell_pair";
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  NodeId h = c.add_node(UnitaryGate{1, 0, gates::hadamard(), "H"});
  NodeId cx = c.add_node(UnitaryGate{2, 0, gates::cnot(), "CNOT"});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  c.add_edge({in, 0}, {h, 0}, EdgeKind::Qubit);
  c.add_edge({h, 0}, {cx, 1}, EdgeKind::Qubit);   // control
  c.add_edge({in, 1}, {cx, 0}, EdgeKind::Qubit);  // target
  c.add_edge({cx, 0}, {out, 1}, EdgeKind::Qubit);
  c.add_edge({cx, 1}, {out, 0}, EdgeKind::Qubit);
  return c;
}

/// Bare 2-qubit CNOT between boundaries: 4 qubit edges.
inline MixedCircuit make_cnot_circuit() {
  MixedCircuit c;
  c.name = "cnot";
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  NodeId cx = c.add_node(UnitaryGate{2, 0, gates::cnot(), "CNOT"});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  c.add_edge({in, 0}, {cx, 0}, EdgeKind::Qubit);
  c.add_edge({in, 1}, {cx, 1}, EdgeKind::Qubit);
  c.add_edge({cx, 0}, {out, 0}, EdgeKind::Qubit);
  c.add_edge({cx, 1}, {out, 1}, EdgeKind::Qubit);
  return c;
}

/// H then measure: one qubit edge into the gate, one into the measurement,
/// one output bit.
inline MixedCircuit make_measure_circuit() {
  MixedCircuit c;
  c.name = "h_measure";
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  NodeId h = c.add_node(UnitaryGate{1, 0, gates::hadamard(), "H"});
  NodeId m = c.add_node(MeasureZ{});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Bit}});
  c.add_edge({in, 0}, {h, 0}, EdgeKind::Qubit);
  c.add_edge({h, 0}, {m, 0}, EdgeKind::Qubit);
  c.add_edge({m, 0}, {out, 0}, EdgeKind::Bit);
  return c;
}

struct RandomCircuitOptions {
  int qubits = 2;
  int steps = 8;
  bool allow_measure = false;
};

/// Seeded random mixed circuit over H/S/T/X/CNOT, optionally with
/// measure-and-reinit plus classically controlled X gates.
inline MixedCircuit random_circuit(uint64_t seed,
                                   const RandomCircuitOptions& opt) {
  std::mt19937_64 rng(seed);
  MixedCircuit c;
  c.name = "random" + std::to_string(seed);
  std::vector<EdgeKind> in_ports(opt.qubits, EdgeKind::Qubit);
  NodeId in = c.add_node(InputNode{in_ports});
  std::vector<Endpoint> wires;
  for (int q = 0; q < opt.qubits; ++q) wires.push_back({in, q});
  std::vector<Endpoint> bits;

  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  static const char* kOneQ[] = {"H", "S", "T", "X"};

  for (int step = 0; step < opt.steps; ++step) {
    int roll = pick(100);
    if (roll < 45 || wires.size() < 2) {
      int q = pick(static_cast<int>(wires.size()));
      std::string name = kOneQ[pick(4)];
      NodeId g = c.add_node(UnitaryGate{1, 0, *gates::builtin(name), name});
      c.add_edge(wires[q], {g, 0}, EdgeKind::Qubit);
      wires[q] = {g, 0};
    } else if (roll < 75) {
      int a = pick(static_cast<int>(wires.size()));
      int b = pick(static_cast<int>(wires.size()) - 1);
      if (b >= a) ++b;
      NodeId g = c.add_node(UnitaryGate{2, 0, gates::cnot(), "CNOT"});
      c.add_edge(wires[a], {g, 0}, EdgeKind::Qubit);
      c.add_edge(wires[b], {g, 1}, EdgeKind::Qubit);
      wires[a] = {g, 0};
      wires[b] = {g, 1};
    } else if (roll < 90 && opt.allow_measure) {
      int q = pick(static_cast<int>(wires.size()));
      NodeId m = c.add_node(MeasureZ{});
      c.add_edge(wires[q], {m, 0}, EdgeKind::Qubit);
      bits.push_back({m, 0});
      NodeId z = c.add_node(InitZero{});
      wires[q] = {z, 0};
    } else if (!bits.empty() && opt.allow_measure) {
      int q = pick(static_cast<int>(wires.size()));
      NodeId g = c.add_node(UnitaryGate{1, 1, gates::pauli(1), "X"});
      c.add_edge(bits.back(), {g, 0}, EdgeKind::Bit);
      bits.pop_back();
      c.add_edge(wires[q], {g, 1}, EdgeKind::Qubit);
      wires[q] = {g, 0};
    } else {
      --step;  // reroll: measurement branch picked while disabled
    }
  }

  std::vector<EdgeKind> out_ports(wires.size(), EdgeKind::Qubit);
  for (size_t i = 0; i < bits.size(); ++i) out_ports.push_back(EdgeKind::Bit);
  NodeId out = c.add_node(OutputNode{out_ports});
  for (size_t i = 0; i < wires.size(); ++i)
    c.add_edge(wires[i], {out, static_cast<int>(i)}, EdgeKind::Qubit);
  for (size_t i = 0; i < bits.size(); ++i)
    c.add_edge(bits[i], {out, static_cast<int>(wires.size() + i)},
               EdgeKind::Bit);
  return c;
}

/// Haar-style random unitary from the QR decomposition of a complex
/// Gaussian matrix, with the R diagonal phases normalized away.
inline Matrix random_unitary(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> gauss;
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    Complex ph = r(j, j) / std::abs(r(j, j));
    q.col(j) *= ph;
  }
  return q;
}

}  // namespace qgerm::testing

#endif  // QGERM_TESTS_SUPPORT_HELPERS_HPP
