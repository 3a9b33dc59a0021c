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

// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdarg>
#include <cstdio>

#include "qgerm/germ.hpp"
#include "qgerm/noise.hpp"
#include "qgerm/parallel.hpp"
#include "qgerm/sim.hpp"
#include "qgerm/transpile.hpp"
#include "support/helpers.hpp"
#include "support/reconstruct.hpp"

using namespace qgerm;

namespace {

int failures = 0;

void report(int criterion, const char* label, bool pass, const char* fmt,
            ...) {
  std::printf("[%s] %d. %s: ", pass ? "PASS" : "FAIL", criterion, label);
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. The gadget computes the identity: tomography and fiducial states.
void criterion_identity() {
  auto t0 = std::chrono::steady_clock::now();
  GadgetTemplate g = teleport_gadget();

  ProcessMatrix pm = tomography(g.circuit);
  double tomo_dist = superop_distance(pm, identity_process(2));
  bool pass = tomo_dist <= 1e-10;

  const double s = 1 / std::sqrt(2.0);
  std::vector<Vector> fiducials;
  for (auto [a, b] : std::initializer_list<std::pair<Complex, Complex>>{
           {1, 0}, {0, 1}, {s, s}, {s, -s}, {s, Complex(0, s)},
           {s, Complex(0, -s)}}) {
    Vector v(2);
    v << a, b;
    fiducials.push_back(v);
  }
  double worst = 0;
  for (const Vector& psi : fiducials) {
    RunResult r = run_pure(g.circuit, RunInput::qubits(psi));
    worst = std::max(worst, 1.0 - fidelity(r.averaged, psi));
  }

  // One half of a Bell pair through the gadget, the other half untouched.
  MixedCircuit c;
  NodeId in = c.add_node(InputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  NodeId out = c.add_node(OutputNode{{EdgeKind::Qubit, EdgeKind::Qubit}});
  c.add_edge({in, 0}, {out, 0}, EdgeKind::Qubit);
  c.add_edge({in, 1}, {out, 1}, EdgeKind::Qubit);
  EdgeId first = c.edges.front().id;
  MixedCircuit with_gadget = insert_teleport(c, std::set<EdgeId>{first});
  Vector bell(4);
  bell << s, 0, 0, s;
  RunResult r = run_pure(with_gadget, RunInput::qubits(bell));
  double bell_err = 1.0 - fidelity(r.averaged, bell);

  pass = pass && worst <= 1e-10 && bell_err <= 1e-10;
  report(1, "teleportation identity", pass,
         "tomography dist %.2e, fiducial err %.2e, bell err %.2e (%.2fs)",
         tomo_dist, worst, bell_err, seconds_since(t0));
}

// 2. Depth and edge accounting over 200 random mixed circuits.
void criterion_depth() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  int max_depth = 0;
  for (uint64_t seed = 1; seed <= 200 && pass; ++seed) {
    testing::RandomCircuitOptions opt;
    opt.qubits = 1 + static_cast<int>(seed % 6);
    opt.steps = 1 + static_cast<int>((seed * 7) % 20);
    opt.allow_measure = true;
    MixedCircuit c = testing::random_circuit(seed, opt);
    if (!validate(c).empty()) {
      pass = false;
      break;
    }
    MixedCircuit t = insert_teleport_everywhere(c);
    int qd = depth(t).quantum_depth;
    max_depth = std::max(max_depth, qd);
    // Each gadget contributes 8 fresh qubit edges next to the original one.
    bool edges_ok =
        t.qubit_edge_count() - c.qubit_edge_count() == 8 * c.qubit_edge_count();
    pass = pass && validate(t).empty() && qd <= 6 && edges_ok;
  }
  report(2, "transpiled depth bound", pass,
         "200 circuits, max quantum depth %d, edge growth 8x (%.2fs)",
         max_depth, seconds_since(t0));
}

// 3. Process matrices of C and its transpilation agree.
void criterion_semantics() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  bool pass = true;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    testing::RandomCircuitOptions opt;
    opt.qubits = 1 + static_cast<int>(seed % 3);
    opt.steps = 4 + static_cast<int>(seed % 5);
    opt.allow_measure = seed % 3 == 0;
    MixedCircuit c = testing::random_circuit(seed * 31 + 5, opt);
    ProcessMatrix original = tomography(c);
    ProcessMatrix transpiled = tomography(insert_teleport_everywhere(c));
    double dist = superop_distance(original, transpiled);
    worst = std::max(worst, dist);
    pass = pass && dist <= 1e-9;
  }
  report(3, "semantic preservation", pass,
         "50 circuits, worst superop distance %.2e (%.2fs)", worst,
         seconds_since(t0));
}

// 4. All 4^8 gadget Pauli patterns reduce to a scaled Pauli conjugation.
void criterion_pushthrough() {
  auto t0 = std::chrono::steady_clock::now();
  constexpr size_t kPatterns = 1u << 16;
  std::vector<double> residuals(kPatterns, 1.0);
  std::vector<char> classified(kPatterns, 0);
  int jobs = resolve_jobs(0);
  parallel_for(kPatterns, jobs, [&](size_t i) {
    try {
      PushthroughResult r =
          gadget_pauli_pushthrough(static_cast<uint16_t>(i));
      residuals[i] = r.residual;
      classified[i] = 1;
    } catch (const Error&) {
      classified[i] = 0;
    }
  });
  size_t bad = 0;
  double worst = 0;
  for (size_t i = 0; i < kPatterns; ++i) {
    if (!classified[i]) ++bad;
    worst = std::max(worst, residuals[i]);
  }
  report(4, "gadget Pauli reduction", bad == 0 && worst <= 1e-9,
         "65536 patterns, %zu unclassifiable, worst residual %.2e, %d jobs "
         "(%.2fs)",
         bad, worst, jobs, seconds_since(t0));
}

// 5. Amplitude and structural inequalities, exhaustively per family.
void criterion_thm3() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<GermModel> models = {
      germ_identity(2), germ_coherent_rotation(0.1, 1, 1),
      germ_coherent_rotation(0.2, 3, 2), germ_delayed_rotation(4, 2, 0.2),
      germ_spreading_flag(0.15)};
  std::vector<MixedCircuit> fixtures = {
      testing::make_wire(4), testing::make_wire(8), testing::make_bell_prep(),
      testing::make_cnot_circuit(), testing::make_measure_circuit()};
  bool pass = true;
  double min_slack = 1e300;
  int checked = 0;
  for (const GermModel& m : models)
    for (const MixedCircuit& c : fixtures) {
      InfectedCircuit ic{c, m};
      int n = depth(c).quantum_depth;
      PauliExpansion ex = multipauli_expand(ic);
      DeltaProfile dp = delta_profile(ic, n);
      Thm3Report r = check_thm3(ex, dp, n, 2);
      pass = pass && r.amplitude_pass && r.structural_pass;
      for (const PatternEntry& e : ex.entries)
        if (e.weight > 0) {
          min_slack = std::min(min_slack,
                               std::pow(r.delta_n, e.m) - e.amplitude);
          ++checked;
        }
      pass = pass && check_structural(c, n, 2);
    }
  report(5, "thm3 inequalities", pass,
         "%d nonzero patterns over %zu models x %zu fixtures, min slack "
         "%.2e (%.2fs)",
         checked, models.size(), fixtures.size(), min_slack,
         seconds_since(t0));
}

// 6. Pattern-summed evolution equals the infected channel.
void criterion_multilinear() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<GermModel> models = {germ_coherent_rotation(0.12, 1, 1),
                                   germ_delayed_rotation(4, 1, 0.3),
                                   germ_spreading_flag(0.2)};
  std::vector<MixedCircuit> fixtures = {testing::make_wire(2),
                                        testing::make_wire(4),
                                        testing::make_cnot_circuit()};
  bool pass = true;
  double worst = 0;
  for (const GermModel& m : models)
    for (const MixedCircuit& c : fixtures) {
      InfectedCircuit ic{c, m};
      ExpandOptions opt;
      opt.keep_states = true;
      PauliExpansion ex = multipauli_expand(ic, opt);
      Matrix reconstructed = testing::reconstruct_superop(c, ex);
      ProcessMatrix direct = tomography(c, &m);
      double dist =
          (reconstructed - direct.superop).cwiseAbs().maxCoeff();
      worst = std::max(worst, dist);
      pass = pass && dist <= 1e-9;
    }
  report(6, "multilinear reconstruction", pass,
         "%zu models x %zu fixtures, worst distance %.2e (%.2fs)",
         models.size(), fixtures.size(), worst, seconds_since(t0));
}

// 7. End-to-end: delayed rotations hurt the bare wire but not its
// transpilation, and the transpilation is quasi-independent.
void criterion_end_to_end() {
  auto t0 = std::chrono::steady_clock::now();
  GermModel model = germ_delayed_rotation(8, 7, 0.25);
  MixedCircuit wire = testing::make_wire(10);
  Vector zero = Vector::Zero(2);
  zero[0] = 1;

  RunResult bare =
      run_infected(infect(wire, model), RunInput::qubits(zero));
  double bare_fid = fidelity(bare.averaged, zero);

  MixedCircuit transpiled = insert_teleport_everywhere(wire);
  RunOptions opt;
  opt.max_dim = Index(1) << 13;
  RunResult safe =
      run_infected(infect(transpiled, model), RunInput::qubits(zero), opt);
  double safe_fid = fidelity(safe.averaged, zero);

  InfectedCircuit ic{transpiled, model};
  DeltaProfile dp = delta_profile(ic, 6);
  double eps = bound_eps(dp.at(6), 2, 6);
  ExpandOptions eo;
  eo.max_edges = 200;
  PauliExpansion ex = multipauli_expand(ic, eo);
  QuasiIndependenceReport quasi = check_quasi_independence(ex, eps);

  bool pass = bare_fid < 0.999 && std::abs(safe_fid - 1.0) <= 1e-9 &&
              quasi.pass;
  report(7, "end-to-end demonstration", pass,
         "bare fidelity %.6f, transpiled fidelity %.12f, delta(6) %.2e, "
         "eps %.2e, quasi-independence %s (%.2fs)",
         bare_fid, safe_fid, dp.at(6), eps, quasi.pass ? "pass" : "fail",
         seconds_since(t0));
}

}  // namespace

int main() {
  criterion_identity();
  criterion_depth();
  criterion_semantics();
  criterion_pushthrough();
  criterion_thm3();
  criterion_multilinear();
  criterion_end_to_end();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
