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

// Command-line front end: validation, statistics, transpilation, simulation
// and noise analysis of mixed circuit files, with structured JSON reports.
//
// Exit codes: 0 ok, 1 domain failure (bad inputs, failed validation), 2
// usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qgerm/circuit_io.hpp"
#include "qgerm/germ_model_io.hpp"
#include "qgerm/noise.hpp"
#include "qgerm/parallel.hpp"
#include "qgerm/sim.hpp"
#include "qgerm/transpile.hpp"

namespace {

using qgerm::Json;

void write_report(const Json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw qgerm::Error("cannot write report file: " + out_path);
  out << report.dump(2) << "\n";
}

qgerm::Vector fiducial(const std::string& token) {
  qgerm::Vector v(2);
  if (token == "0")
    v << 1, 0;
  else if (token == "1")
    v << 0, 1;
  else if (token == "+")
    v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  else if (token == "-")
    v << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  else if (token == "+i")
    v << 1 / std::sqrt(2.0), qgerm::Complex(0, 1 / std::sqrt(2.0));
  else if (token == "-i")
    v << 1 / std::sqrt(2.0), qgerm::Complex(0, -1 / std::sqrt(2.0));
  else
    throw qgerm::Error("unknown fiducial '" + token +
                       "' (use 0, 1, +, -, +i, -i)");
  return v;
}

// Input spec: comma-separated fiducial tokens, one per input qubit port,
// first token = first port = most significant factor. A plain basis string
// like "010" also works.
qgerm::Vector parse_input(const std::string& spec, size_t num_qubits) {
  std::vector<std::string> tokens;
  if (spec.find(',') != std::string::npos) {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) tokens.push_back(tok);
  } else {
    for (char ch : spec) tokens.emplace_back(1, ch);
  }
  if (tokens.size() != num_qubits)
    throw qgerm::Error("input has " + std::to_string(tokens.size()) +
                       " qubit tokens, circuit expects " +
                       std::to_string(num_qubits));
  qgerm::Vector v = qgerm::Vector::Ones(1);
  for (const std::string& tok : tokens) {
    qgerm::Vector f = fiducial(tok);
    qgerm::Vector nv(v.size() * 2);
    for (qgerm::Index i = 0; i < v.size(); ++i) nv.segment(2 * i, 2) = v[i] * f;
    v = std::move(nv);
  }
  return v;
}

std::vector<int> parse_bits(const std::string& spec) {
  std::vector<int> bits;
  for (char ch : spec) {
    if (ch != '0' && ch != '1')
      throw qgerm::Error("bit string must contain only 0 and 1");
    bits.push_back(ch - '0');
  }
  return bits;
}

Json density_json(const qgerm::Matrix& m) {
  return qgerm::io_detail::emit_matrix(m);
}

const char* connectivity_name(qgerm::Connectivity conn) {
  switch (conn) {
    case qgerm::Connectivity::None:
      return "none";
    case qgerm::Connectivity::Weak:
      return "weak";
    default:
      return "strong";
  }
}

const char* layer_class_name(qgerm::LayerClass lc) {
  switch (lc) {
    case qgerm::LayerClass::SQCL:
      return "SQCL";
    case qgerm::LayerClass::AQCL:
      return "AQCL";
    default:
      return "unbounded";
  }
}

Json simulate_report(const qgerm::RunResult& result) {
  Json report;
  report["classical_dist"] = Json::object();
  for (const auto& [bits, p] : result.classical_dist)
    report["classical_dist"][bits.empty() ? "-" : bits] = p;
  Json branches = Json::array();
  for (const qgerm::BranchResult& b : result.branches)
    branches.push_back({{"bits", b.bits},
                        {"probability", b.probability},
                        {"state", density_json(b.state.entries)}});
  report["branches"] = std::move(branches);
  report["averaged"] = density_json(result.averaged.entries);
  return report;
}

struct AnalyzeFlags {
  std::string circuit_path, model_path, out_path;
  int n = -1;  // default: quantum depth
  int k = 0;   // default: max gate arity (min 1)
  double eps = -1;
  double constant = 1.0;
  std::size_t max_edges = 8;
  int top = 16;
};

int gate_arity_max(const qgerm::MixedCircuit& c) {
  int k = 1;
  for (const qgerm::Node& n : c.nodes)
    if (const auto* u = std::get_if<qgerm::UnitaryGate>(&n.kind))
      k = std::max(k, u->qubits);
  return k;
}

Json analyze_report(const qgerm::InfectedCircuit& ic, AnalyzeFlags flags) {
  qgerm::DepthReport dep = qgerm::depth(ic.base);
  if (flags.n < 0) flags.n = dep.quantum_depth;
  if (flags.k <= 0) flags.k = gate_arity_max(ic.base);

  qgerm::ExpandOptions eo;
  eo.max_edges = flags.max_edges;
  qgerm::PauliExpansion expansion = qgerm::multipauli_expand(ic, eo);
  qgerm::DeltaProfile profile = qgerm::delta_profile(ic, flags.n);
  qgerm::Thm3Report thm3 =
      qgerm::check_thm3(expansion, profile, flags.n, flags.k);
  double eps = flags.eps >= 0
                   ? flags.eps
                   : qgerm::bound_eps(profile.at(flags.n), flags.k, flags.n);
  qgerm::QuasiIndependenceReport quasi =
      qgerm::check_quasi_independence(expansion, eps, flags.constant);

  Json report;
  report["circuit"] = ic.base.name;
  report["n"] = flags.n;
  report["k"] = flags.k;
  Json dp;
  dp["delta"] = profile.delta;
  dp["per_edge"] = Json::object();
  for (const auto& [id, v] : profile.per_edge)
    dp["per_edge"][std::to_string(id)] = v;
  report["delta_profile"] = std::move(dp);

  std::vector<const qgerm::PatternEntry*> sorted;
  for (const qgerm::PatternEntry& e : expansion.entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const qgerm::PatternEntry* a, const qgerm::PatternEntry* b) {
              return a->amplitude > b->amplitude;
            });
  Json exp = Json::array();
  for (const qgerm::PatternEntry* e : sorted) {
    if (static_cast<int>(exp.size()) >= flags.top) break;
    exp.push_back({{"pattern", qgerm::pattern_string(e->paulis)},
                   {"amplitude", e->amplitude},
                   {"weight", e->weight},
                   {"m", e->m}});
  }
  report["expansion"] = std::move(exp);
  report["thm3_check"] = {
      {"amplitude_pass", thm3.amplitude_pass},
      {"structural_pass", thm3.structural_pass},
      {"delta_n", thm3.delta_n},
      {"worst_amplitude_margin", thm3.worst_amplitude_margin},
      {"worst_pattern", thm3.worst_pattern},
      {"amplitude_violations", thm3.amplitude_violations},
      {"structural_violations", thm3.structural_violations}};
  report["quasi_independence"] = {{"eps", quasi.eps},
                                  {"constant", quasi.constant},
                                  {"worst_ratio", quasi.worst_ratio},
                                  {"worst_pattern", quasi.worst_pattern},
                                  {"pass", quasi.pass}};
  report["bounds"] = {{"eps", eps}, {"gadget_delta", qgerm::bound_gadget(eps)}};
  return report;
}

double overlap_with_ideal(const qgerm::DensityOp& ideal,
                          const qgerm::DensityOp& noisy) {
  // True fidelity when the ideal output is pure; plain overlap otherwise.
  double purity = (ideal.entries * ideal.entries).trace().real();
  if (purity > 1.0 - 1e-9) {
    Eigen::SelfAdjointEigenSolver<qgerm::Matrix> es(ideal.entries);
    qgerm::Index top;
    es.eigenvalues().maxCoeff(&top);
    qgerm::Vector psi = es.eigenvectors().col(top);
    return (psi.adjoint() * noisy.entries * psi)(0, 0).real();
  }
  return (ideal.entries * noisy.entries).trace().real();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed quantum-classical circuits: teleportation transpiling "
               "and contagious-noise analysis"};
  app.require_subcommand(1);

  // validate ---------------------------------------------------------------
  std::string v_circuit;
  CLI::App* validate = app.add_subcommand("validate", "check a circuit file");
  validate->add_option("--circuit", v_circuit, "circuit file")->required();

  // stats ------------------------------------------------------------------
  std::string s_circuit, s_out;
  int s_bound = -1;
  CLI::App* stats = app.add_subcommand("stats", "depth and shape report");
  stats->add_option("--circuit", s_circuit, "circuit file")->required();
  stats->add_option("--bound", s_bound, "layer bound b for classification");
  stats->add_option("--out", s_out, "report file (default stdout)");

  // transpile ----------------------------------------------------------------
  std::string t_circuit, t_out, t_edges;
  CLI::App* transpile =
      app.add_subcommand("transpile", "replace qubit edges by gadgets");
  transpile->add_option("--circuit", t_circuit, "circuit file")->required();
  transpile->add_option("--edges", t_edges,
                        "comma-separated edge ids (default: all qubit edges)");
  transpile->add_option("--out", t_out, "output circuit file (default stdout)");

  // simulate -----------------------------------------------------------------
  std::string m_circuit, m_model, m_input, m_bits, m_mode = "branch", m_out;
  uint64_t m_seed = 0;
  qgerm::Index m_max_dim = qgerm::Index(1) << 12;
  CLI::App* simulate = app.add_subcommand("simulate", "run a circuit");
  simulate->add_option("--circuit", m_circuit, "circuit file")->required();
  simulate->add_option("--germ-model", m_model, "germ model file (optional)");
  simulate->add_option("--input", m_input,
                       "input qubits: basis string or comma-separated "
                       "fiducials 0,1,+,-,+i,-i (default all |0>)");
  simulate->add_option("--bits", m_bits, "input bit values as a 0/1 string");
  simulate->add_option("--mode", m_mode, "branch (default) or sample")
      ->check(CLI::IsMember({"branch", "sample"}));
  simulate->add_option("--seed", m_seed, "sampling seed");
  simulate->add_option("--max-dim", m_max_dim, "live dimension budget");
  simulate->add_option("--out", m_out, "report file (default stdout)");

  // analyze ------------------------------------------------------------------
  AnalyzeFlags a;
  CLI::App* analyze =
      app.add_subcommand("analyze", "noise expansion and bound checks");
  analyze->add_option("--circuit", a.circuit_path, "circuit file")->required();
  analyze->add_option("--germ-model", a.model_path, "germ model file")
      ->required();
  analyze->add_option("--n", a.n, "depth for delta(n) (default: qdepth)");
  analyze->add_option("--k", a.k, "max gate arity (default: from circuit)");
  analyze->add_option("--eps", a.eps,
                      "quasi-independence eps (default: bound_eps)");
  analyze->add_option("--constant", a.constant, "quasi-independence constant");
  analyze->add_option("--max-edges", a.max_edges, "pattern enumeration cap");
  analyze->add_option("--top", a.top, "expansion entries to report");
  analyze->add_option("--out", a.out_path, "report file (default stdout)");

  // gadget-check ---------------------------------------------------------
  std::string g_out;
  int g_jobs = 0;
  CLI::App* gadget_check = app.add_subcommand(
      "gadget-check", "classify all 4^8 gadget Pauli patterns");
  gadget_check->add_option("--jobs", g_jobs,
                           "worker threads (default: QGERM_JOBS or cores)");
  gadget_check->add_option("--out", g_out, "table file (default stdout)");

  // bounds -------------------------------------------------------------------
  double b_delta = -1, b_eps = -1, b_k = 2;
  int b_n = 1;
  bool b_tighten = false;
  std::string b_out;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the error bounds");
  bounds->add_option("--delta", b_delta, "delta(n) value");
  bounds->add_option("--k", b_k, "max gate arity");
  bounds->add_option("--n", b_n, "depth n");
  bounds->add_option("--eps", b_eps, "eps for the gadget bound");
  bounds->add_flag("--tighten-by-3", b_tighten,
                   "divide the gadget bound by 3 (symmetry argument)");
  bounds->add_option("--out", b_out, "report file (default stdout)");

  // pipeline -------------------------------------------------------------
  std::string p_circuit, p_model, p_input, p_out;
  int p_n = 6, p_k = 0;
  std::size_t p_max_edges = 256;
  qgerm::Index p_max_dim = qgerm::Index(1) << 13;
  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "compare untransformed vs transpiled under a germ model");
  pipeline->add_option("--circuit", p_circuit, "circuit file")->required();
  pipeline->add_option("--germ-model", p_model, "germ model file")->required();
  pipeline->add_option("--input", p_input, "input qubits (see simulate)");
  pipeline->add_option("--n", p_n, "depth for the transpiled bound_eps");
  pipeline->add_option("--k", p_k, "max gate arity (default: from circuit)");
  pipeline->add_option("--max-edges", p_max_edges, "pattern enumeration cap");
  pipeline->add_option("--max-dim", p_max_dim, "live dimension budget");
  pipeline->add_option("--out", p_out, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) {
      qgerm::MixedCircuit c = qgerm::load_circuit(v_circuit);
      std::vector<qgerm::Violation> violations = qgerm::validate(c);
      Json report;
      report["circuit"] = c.name;
      report["valid"] = violations.empty();
      Json list = Json::array();
      for (const qgerm::Violation& v : violations)
        list.push_back({{"code", v.code}, {"message", v.message}});
      report["violations"] = std::move(list);
      std::cout << report.dump(2) << "\n";
      return violations.empty() ? 0 : 1;
    }

    if (*stats) {
      qgerm::MixedCircuit c = qgerm::load_circuit(s_circuit);
      qgerm::require_valid(c);
      qgerm::DepthReport dep = qgerm::depth(c);
      Json report;
      report["circuit"] = c.name;
      report["total_depth"] = dep.total_depth;
      report["quantum_depth"] = dep.quantum_depth;
      report["qubit_edges"] = c.qubit_edge_count();
      report["bit_edges"] = c.bit_edge_count();
      Json conn = Json::array();
      for (const qgerm::Endpoint& in : c.input_qubit_ports())
        for (const qgerm::Endpoint& out : c.output_qubit_ports())
          conn.push_back(
              {{"in", {in.node, in.port}},
               {"out", {out.node, out.port}},
               {"value",
                connectivity_name(qgerm::quantum_connectivity(c, in, out))}});
      report["connectivity"] = std::move(conn);
      if (s_bound >= 0) {
        report["bound"] = s_bound;
        report["layer_class"] =
            layer_class_name(qgerm::classify_layers(c, s_bound));
      }
      write_report(report, s_out);
      return 0;
    }

    if (*transpile) {
      qgerm::MixedCircuit c = qgerm::load_circuit(t_circuit);
      std::optional<std::set<qgerm::EdgeId>> only;
      if (!t_edges.empty()) {
        only.emplace();
        std::stringstream ss(t_edges);
        std::string tok;
        while (std::getline(ss, tok, ',')) only->insert(std::stoi(tok));
      }
      qgerm::MixedCircuit result = qgerm::insert_teleport(c, only);
      if (t_out.empty())
        std::cout << qgerm::emit_circuit(result).dump(2) << "\n";
      else
        qgerm::save_circuit(result, t_out);
      return 0;
    }

    if (*simulate) {
      qgerm::MixedCircuit c = qgerm::load_circuit(m_circuit);
      qgerm::require_valid(c);
      size_t nq = c.input_qubit_ports().size();
      qgerm::RunInput input;
      if (nq > 0) {
        std::string spec = m_input.empty() ? std::string(nq, '0') : m_input;
        input = qgerm::RunInput::qubits(parse_input(spec, nq));
      }
      input.bits = parse_bits(m_bits);
      qgerm::RunOptions opt;
      opt.mode = m_mode == "sample" ? qgerm::RunOptions::Mode::Sample
                                    : qgerm::RunOptions::Mode::Branch;
      opt.seed = m_seed;
      opt.max_dim = m_max_dim;
      qgerm::RunResult result;
      if (m_model.empty()) {
        result = qgerm::run_pure(c, input, opt);
      } else {
        qgerm::GermModel model = qgerm::load_germ_model(m_model);
        result = qgerm::run_infected(qgerm::infect(c, model), input, opt);
      }
      Json report = simulate_report(result);
      report["circuit"] = c.name;
      report["mode"] = m_mode;
      if (opt.mode == qgerm::RunOptions::Mode::Sample)
        report["seed"] = m_seed;
      write_report(report, m_out);
      return 0;
    }

    if (*analyze) {
      qgerm::MixedCircuit c = qgerm::load_circuit(a.circuit_path);
      qgerm::GermModel model = qgerm::load_germ_model(a.model_path);
      Json report = analyze_report(qgerm::infect(c, model), a);
      write_report(report, a.out_path);
      return 0;
    }

    if (*gadget_check) {
      int jobs = qgerm::resolve_jobs(g_jobs);
      constexpr size_t kPatterns = 1u << 16;  // 4^8
      std::vector<qgerm::PushthroughResult> results(kPatterns);
      qgerm::parallel_for(kPatterns, jobs, [&](size_t i) {
        results[i] =
            qgerm::gadget_pauli_pushthrough(static_cast<uint16_t>(i));
      });
      static const char kNames[] = "IXYZ";
      size_t by_pauli[4] = {0, 0, 0, 0};
      size_t zeros = 0;
      double max_residual = 0;
      Json table = Json::array();
      for (size_t i = 0; i < kPatterns; ++i) {
        const qgerm::PushthroughResult& r = results[i];
        std::vector<uint8_t> paulis(8);
        for (size_t b = 0; b < 8; ++b)
          paulis[b] = static_cast<uint8_t>((i >> (2 * b)) & 3);
        if (r.pauli < 0)
          ++zeros;
        else
          ++by_pauli[r.pauli];
        max_residual = std::max(max_residual, r.residual);
        table.push_back(
            {{"pattern", qgerm::pattern_string(paulis)},
             {"pauli", r.pauli < 0 ? std::string("0")
                                   : std::string(1, kNames[r.pauli])},
             {"scale", r.scale}});
      }
      Json report;
      report["patterns"] = kPatterns;
      report["jobs"] = jobs;
      report["max_residual"] = max_residual;
      report["non_error"] = zeros;
      for (int j = 0; j < 4; ++j)
        report["by_pauli"][std::string(1, kNames[j])] = by_pauli[j];
      if (g_out.empty()) {
        report["table"] = std::move(table);
        std::cout << report.dump(2) << "\n";
      } else {
        Json doc = report;
        doc["table"] = std::move(table);
        std::ofstream out(g_out);
        if (!out) throw qgerm::Error("cannot write table file: " + g_out);
        out << doc.dump() << "\n";
        std::cout << report.dump(2) << "\n";
      }
      return 0;
    }

    if (*bounds) {
      Json report;
      double eps = b_eps;
      if (b_delta >= 0) {
        eps = qgerm::bound_eps(b_delta, b_k, b_n);
        report["delta"] = b_delta;
        report["k"] = b_k;
        report["n"] = b_n;
        report["eps"] = eps;
      }
      if (eps >= 0)
        report["gadget_delta"] = qgerm::bound_gadget(eps, b_tighten);
      if (report.empty())
        throw qgerm::Error("bounds: give --delta (with --k, --n) and/or --eps");
      write_report(report, b_out);
      return 0;
    }

    if (*pipeline) {
      qgerm::MixedCircuit original = qgerm::load_circuit(p_circuit);
      qgerm::require_valid(original);
      qgerm::GermModel model = qgerm::load_germ_model(p_model);
      qgerm::MixedCircuit transpiled = qgerm::insert_teleport_everywhere(original);
      if (p_k <= 0) p_k = gate_arity_max(original);

      size_t nq = original.input_qubit_ports().size();
      qgerm::RunInput input;
      if (nq > 0) {
        std::string spec = p_input.empty() ? std::string(nq, '0') : p_input;
        input = qgerm::RunInput::qubits(parse_input(spec, nq));
      }
      qgerm::RunOptions opt;
      opt.max_dim = p_max_dim;

      Json report;
      report["circuit"] = original.name;
      for (bool trans : {false, true}) {
        const qgerm::MixedCircuit& c = trans ? transpiled : original;
        qgerm::DepthReport dep = qgerm::depth(c);
        qgerm::RunResult ideal = qgerm::run_pure(c, input, opt);
        qgerm::InfectedCircuit ic = qgerm::infect(c, model);
        qgerm::RunResult noisy = qgerm::run_infected(ic, input, opt);
        int n = std::min(p_n, dep.quantum_depth);
        qgerm::DeltaProfile profile = qgerm::delta_profile(ic, n);
        Json side;
        side["quantum_depth"] = dep.quantum_depth;
        side["qubit_edges"] = c.qubit_edge_count();
        side["fidelity"] = overlap_with_ideal(ideal.averaged, noisy.averaged);
        side["delta_profile"] = profile.delta;
        if (trans) {
          double eps = qgerm::bound_eps(profile.at(n), p_k, n);
          qgerm::ExpandOptions eo;
          eo.max_edges = p_max_edges;
          qgerm::PauliExpansion expansion = qgerm::multipauli_expand(ic, eo);
          qgerm::QuasiIndependenceReport quasi =
              qgerm::check_quasi_independence(expansion, eps);
          side["quasi_independence"] = {{"eps", eps},
                                        {"n", n},
                                        {"k", p_k},
                                        {"pass", quasi.pass},
                                        {"worst_ratio", quasi.worst_ratio}};
        }
        report[trans ? "transpiled" : "untransformed"] = std::move(side);
      }
      write_report(report, p_out);
      return 0;
    }
  } catch (const qgerm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
