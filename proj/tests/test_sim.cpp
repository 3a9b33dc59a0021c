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

#include "qgerm/germ.hpp"
#include "qgerm/sim.hpp"
#include "qgerm/transpile.hpp"
#include "support/helpers.hpp"

using namespace qgerm;

namespace {

MixedCircuit bell_measure() {
  MixedCircuit c = testing::make_bell_prep();
  // Swap the output node for measurements feeding bit outputs.
  c = MixedCircuit{};
  c.name = "bell_measure";
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  NodeId h = c.add_node(UnitaryGate{1, 0, gates::hadamard(), "H"});
  NodeId cx = c.add_node(UnitaryGate{2, 0, gates::cnot(), "CNOT"});
  NodeId m0 = c.add_node(MeasureZ{});
  NodeId m1 = c.add_node(MeasureZ{});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Bit, EdgeKind::Bit}});
  c.add_edge({in, 0}, {h, 0}, EdgeKind::Qubit);
  c.add_edge({h, 0}, {cx, 1}, EdgeKind::Qubit);
  c.add_edge({in, 1}, {cx, 0}, EdgeKind::Qubit);
  c.add_edge({cx, 1}, {m0, 0}, EdgeKind::Qubit);
  c.add_edge({cx, 0}, {m1, 0}, EdgeKind::Qubit);
  c.add_edge({m0, 0}, {out, 0}, EdgeKind::Bit);
  c.add_edge({m1, 0}, {out, 1}, EdgeKind::Bit);
  return c;
}

Vector basis2(int i) {
  Vector v = Vector::Zero(2);
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("bell measurement gives perfectly correlated bits") {
  RunResult r = run_pure(bell_measure(), RunInput::qubits(Vector::Unit(4, 0)));
  REQUIRE(r.classical_dist.size() == 2);
  CHECK(r.classical_dist.at("00") == Catch::Approx(0.5));
  CHECK(r.classical_dist.at("11") == Catch::Approx(0.5));
}

TEST_CASE("branch states are normalized and weighted") {
  MixedCircuit c = testing::make_measure_circuit();
  RunResult r = run_pure(c, RunInput::qubits(basis2(0)));
  double total = 0;
  for (const BranchResult& b : r.branches) {
    total += b.probability;
    CHECK(std::abs(b.state.trace_real() - (b.state.entries.size() ? 1.0 : 1.0)) <
          1e-12);
  }
  CHECK(total == Catch::Approx(1.0));
  CHECK(r.classical_dist.at("0") == Catch::Approx(0.5));
  CHECK(r.classical_dist.at("1") == Catch::Approx(0.5));
}

TEST_CASE("sample mode is reproducible and unbiased") {
  MixedCircuit c = testing::make_measure_circuit();
  RunOptions opt;
  opt.mode = RunOptions::Mode::Sample;
  opt.seed = 42;
  RunResult a = run_pure(c, RunInput::qubits(basis2(0)), opt);
  RunResult b = run_pure(c, RunInput::qubits(basis2(0)), opt);
  REQUIRE(a.branches.size() == 1);
  CHECK(a.branches[0].bits == b.branches[0].bits);
  CHECK(a.branches[0].probability == 1.0);

  int ones = 0;
  for (uint64_t seed = 0; seed < 400; ++seed) {
    opt.seed = seed;
    RunResult r = run_pure(c, RunInput::qubits(basis2(0)), opt);
    ones += r.branches[0].bits == "1";
  }
  CHECK(ones > 140);
  CHECK(ones < 260);
}

TEST_CASE("classically controlled gates fire on their control value") {
  // Measure |1>, feed the bit into a controlled X on a fresh |0> qubit.
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  NodeId m = c.add_node(MeasureZ{});
  NodeId z = c.add_node(InitZero{});
  NodeId g = c.add_node(UnitaryGate{1, 1, gates::pauli(1), "X"});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit}});
  c.add_edge({in, 0}, {m, 0}, EdgeKind::Qubit);
  c.add_edge({m, 0}, {g, 0}, EdgeKind::Bit);
  c.add_edge({z, 0}, {g, 1}, EdgeKind::Qubit);
  c.add_edge({g, 0}, {out, 0}, EdgeKind::Qubit);
  REQUIRE(validate(c).empty());

  RunResult flip = run_pure(c, RunInput::qubits(basis2(1)));
  CHECK(fidelity(flip.averaged, basis2(1)) == Catch::Approx(1.0));
  RunResult keep = run_pure(c, RunInput::qubits(basis2(0)));
  CHECK(fidelity(keep.averaged, basis2(0)) == Catch::Approx(1.0));
}

TEST_CASE("classical tables evaluate bitwise") {
  // XOR: two input bits to one output bit.
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Bit, EdgeKind::Bit}});
  NodeId f = c.add_node(ClassicalDet{2, 1, {0, 1, 1, 0}});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Bit}});
  c.add_edge({in, 0}, {f, 0}, EdgeKind::Bit);
  c.add_edge({in, 1}, {f, 1}, EdgeKind::Bit);
  c.add_edge({f, 0}, {out, 0}, EdgeKind::Bit);
  REQUIRE(validate(c).empty());

  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      RunInput input;
      input.bits = {a, b};
      RunResult r = run_pure(c, input);
      std::string want(1, static_cast<char>('0' + (a ^ b)));
      INFO(a << " xor " << b);
      CHECK(r.classical_dist.at(want) == Catch::Approx(1.0));
    }
}

TEST_CASE("copy table duplicates a measured bit") {
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  NodeId m = c.add_node(MeasureZ{});
  NodeId f = c.add_node(ClassicalDet{1, 2, {0b00, 0b11}});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Bit, EdgeKind::Bit}});
  c.add_edge({in, 0}, {m, 0}, EdgeKind::Qubit);
  c.add_edge({m, 0}, {f, 0}, EdgeKind::Bit);
  c.add_edge({f, 0}, {out, 0}, EdgeKind::Bit);
  c.add_edge({f, 1}, {out, 1}, EdgeKind::Bit);
  REQUIRE(validate(c).empty());

  Vector plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  RunResult r = run_pure(c, RunInput::qubits(plus));
  CHECK(r.classical_dist.at("00") == Catch::Approx(0.5));
  CHECK(r.classical_dist.at("11") == Catch::Approx(0.5));
  CHECK(r.classical_dist.count("01") == 0);
}

TEST_CASE("gadget preserves arbitrary pure states") {
  GadgetTemplate g = teleport_gadget();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Vector psi = testing::random_unitary(rng, 2).col(0);
    RunResult r = run_pure(g.circuit, RunInput::qubits(psi));
    CHECK(fidelity(r.averaged, psi) == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("infected wire under coherent rotation loses cos^2 fidelity") {
  double theta = 0.1;
  MixedCircuit c = testing::make_wire(1);
  InfectedCircuit ic = infect(c, germ_coherent_rotation(theta));
  RunResult r = run_infected(ic, RunInput::qubits(basis2(0)));
  CHECK(fidelity(r.averaged, basis2(0)) ==
        Catch::Approx(std::cos(theta) * std::cos(theta)));
}

TEST_CASE("identity germ model changes nothing") {
  MixedCircuit c = testing::make_bell_prep();
  Vector in = Vector::Unit(4, 0);
  RunResult pure = run_pure(c, RunInput::qubits(in));
  RunResult infected =
      run_infected(infect(c, germ_identity(2)), RunInput::qubits(in));
  CHECK((pure.averaged.entries - infected.averaged.entries)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("spreading flag stays dormant without activation") {
  GermModel m = germ_spreading_flag(0.3);
  MixedCircuit c = testing::make_cnot_circuit();
  RunResult r = run_infected(infect(c, m), RunInput::qubits(Vector::Unit(4, 0)));
  CHECK(fidelity(r.averaged, Vector::Unit(4, 0)) ==
        Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("activated spreading flag rotates every touched qubit") {
  GermModel m = germ_spreading_flag(0.3);
  MixedCircuit c = testing::make_cnot_circuit();
  // Activate the germ spawned at the first input port.
  Vector active(2);
  active << 0, 1;
  m.g0_overrides[c.input_qubit_ports()[0].node] = active;
  // Both input germs spawn at the same input node, so both start active.
  RunResult r = run_infected(infect(c, m), RunInput::qubits(Vector::Unit(4, 0)));
  double f = fidelity(r.averaged, Vector::Unit(4, 0));
  CHECK(f < 1.0 - 1e-6);  // noise actually hits
  CHECK(r.averaged.trace_real() == Catch::Approx(1.0));
}

TEST_CASE("tomography of stock unitaries") {
  ProcessMatrix wire = tomography(testing::make_wire(3));
  CHECK(superop_distance(wire, identity_process(2)) < 1e-12);
  CHECK(wire.is_trace_preserving());
  CHECK(wire.is_completely_positive());

  ProcessMatrix cx = tomography(testing::make_cnot_circuit());
  Matrix u = gates::cnot();
  Matrix want = sim_detail::kron(u.conjugate(), u);
  CHECK((cx.superop - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tomography of a measurement is the dephasing channel") {
  // Measure and rebuild the qubit from the bit via a controlled X.
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit}});
  NodeId m = c.add_node(MeasureZ{});
  NodeId f = c.add_node(ClassicalDet{1, 2, {0b00, 0b11}});
  NodeId z = c.add_node(InitZero{});
  NodeId g = c.add_node(UnitaryGate{1, 1, gates::pauli(1), "X"});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit, EdgeKind::Bit}});
  c.add_edge({in, 0}, {m, 0}, EdgeKind::Qubit);
  c.add_edge({m, 0}, {f, 0}, EdgeKind::Bit);
  c.add_edge({f, 0}, {g, 0}, EdgeKind::Bit);
  c.add_edge({f, 1}, {out, 1}, EdgeKind::Bit);
  c.add_edge({z, 0}, {g, 1}, EdgeKind::Qubit);
  c.add_edge({g, 0}, {out, 0}, EdgeKind::Qubit);
  REQUIRE(validate(c).empty());

  ProcessMatrix p = tomography(c);
  Matrix rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  Matrix dephased = p.apply(rho);
  CHECK(std::abs(dephased(0, 1)) < 1e-12);
  CHECK(dephased(0, 0).real() == Catch::Approx(0.5));
  CHECK(p.is_trace_preserving());
  CHECK(p.is_completely_positive());
}

TEST_CASE("channel application is linear in the input") {
  MixedCircuit c = testing::make_bell_prep();
  ProcessMatrix p = tomography(c);
  std::mt19937_64 rng(17);
  Matrix a = testing::random_unitary(rng, 4);
  Matrix rho = a * Matrix::Identity(4, 4) * a.adjoint() / 4.0;
  Matrix direct = apply_channel(c, nullptr, rho, {});
  CHECK((direct - p.apply(rho)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("input validation") {
  MixedCircuit c = testing::make_bell_prep();
  RunInput bad;
  bad.state = StateVec(SpaceShape{2}, basis2(0));
  CHECK_THROWS_AS(run_pure(c, bad), Error);

  MixedCircuit big = testing::make_wire(2);
  RunOptions opt;
  opt.max_dim = 1;
  CHECK_THROWS_AS(run_pure(big, RunInput::qubits(basis2(0)), opt), Error);
}

TEST_CASE("tomography guards") {
  testing::RandomCircuitOptions opt;
  opt.qubits = 4;
  opt.steps = 2;
  MixedCircuit four = testing::random_circuit(3, opt);
  CHECK_THROWS_AS(tomography(four), Error);

  MixedCircuit bits;
  NodeId in = bits.add_node(InputNode{{EdgeKind::Qubit, EdgeKind::Bit}});
  NodeId g = bits.add_node(UnitaryGate{1, 1, gates::pauli(1), "X"});
  NodeId out = bits.add_node(OutputNode{{EdgeKind::Qubit}});
  bits.add_edge({in, 1}, {g, 0}, EdgeKind::Bit);
  bits.add_edge({in, 0}, {g, 1}, EdgeKind::Qubit);
  bits.add_edge({g, 0}, {out, 0}, EdgeKind::Qubit);
  REQUIRE(validate(bits).empty());
  CHECK_THROWS_AS(tomography(bits), Error);
}

TEST_CASE("infect validates overrides") {
  MixedCircuit c = testing::make_bell_prep();
  GermModel m = germ_identity(2);
  m.mixer_overrides[0] = Matrix::Identity(2, 2);  // node 0 is the input node
  CHECK_THROWS_AS(infect(c, m), Error);
}
