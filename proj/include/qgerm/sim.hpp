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

#ifndef QGERM_SIM_HPP
#define QGERM_SIM_HPP

#include <map>
#include <random>
#include <string>
#include <utility>

#include "qgerm/circuit.hpp"
#include "qgerm/germ.hpp"

namespace qgerm {

struct RunOptions {
  enum class Mode { Branch, Sample };
  Mode mode = Mode::Branch;
  uint64_t seed = 0;
  // Cap on the live joint Hilbert dimension (the density matrix holds its
  // square in entries).
  Index max_dim = Index(1) << 12;
};

struct RunInput {
  StateVec state;         // joint state of the input qubit ports, port order
  std::vector<int> bits;  // input bit values, port order

  static RunInput qubits(Vector amps) {
    size_t n = 0;
    while ((size_t(1) << n) < static_cast<size_t>(amps.size())) ++n;
    std::vector<Index> dims(n, 2);
    return RunInput{StateVec(SpaceShape(dims), std::move(amps)), {}};
  }
};

struct BranchResult {
  std::string bits;  // output bit values, port order
  double probability = 0;
  DensityOp state;  // normalized, output qubit ports in port order
};

struct RunResult {
  std::map<std::string, double> classical_dist;
  std::vector<BranchResult> branches;
  DensityOp averaged;  // output qubits, germs and bits traced out
};

struct InfectedCircuit {
  MixedCircuit base;
  GermModel model;
};

inline InfectedCircuit infect(const MixedCircuit& c, const GermModel& m) {
  require_valid(c);
  m.check();
  for (const auto& [id, mx] : m.mixer_overrides) {
    const Node& n = c.node(id);
    int k;
    if (const auto* u = std::get_if<UnitaryGate>(&n.kind))
      k = u->qubits;
    else if (std::holds_alternative<MeasureZ>(n.kind))
      k = 1;
    else
      throw Error("mixer override on node " + std::to_string(id) +
                  ": not a gate with input qubits");
    Index want = 1;
    for (int i = 0; i < k; ++i) want *= m.dim;
    if (mx.rows() != want)
      throw Error("mixer override on node " + std::to_string(id) +
                  ": arity mismatch");
  }
  for (const auto& [id, e] : m.edge_overrides)
    if (c.edge(id).kind != EdgeKind::Qubit)
      throw Error("edge error override on bit edge " + std::to_string(id));
  return InfectedCircuit{c, m};
}

namespace sim_detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// One density-matrix engine covers all modes. Bits live as dephased
/// factors (branch mode) or sampled values (sample mode); classically
/// controlled unitaries become quantum-controlled on the dephased factor and
/// the control is traced right after, which reproduces the classical
/// semantics exactly. In channel mode the input is an arbitrary matrix and
/// nothing is ever normalized or sampled, so the engine computes the action
/// of the circuit's channel on that matrix by linearity.
class DensityEngine {
 public:
  DensityEngine(const MixedCircuit& c, const GermModel* model,
                const RunOptions& opt, bool channel_mode)
      : c_(c), model_(model), opt_(opt), channel_(channel_mode), rng_(opt.seed) {
    if (channel_ && opt_.mode == RunOptions::Mode::Sample)
      throw Error("channel application requires branch mode");
    in_by_ = detail::in_edges_by_node(c_);
    out_by_ = detail::out_edges_by_node(c_);
    rho_ = Matrix::Ones(1, 1);
  }

  void run(const Matrix& qubit_input, const std::vector<int>& bit_input) {
    init_inputs(qubit_input, bit_input);
    schedule();
  }

  /// Channel mode result: everything but the output qubits traced out.
  Matrix channel_output() {
    std::vector<int> keep;
    for (const Endpoint& p : c_.output_qubit_ports())
      keep.push_back(out_qubit_.at({p.node, p.port}));
    return partial_trace(DensityOp(SpaceShape(dims_), rho_), keep).entries;
  }

  RunResult finish() {
    // Germs of output qubits are traced before reporting.
    std::vector<int> germs;
    for (auto& [port, g] : out_germ_)
      if (g >= 0) germs.push_back(g);
    std::sort(germs.rbegin(), germs.rend());
    for (int g : germs) remove_factor(g);

    std::vector<int> keep_q;
    for (const Endpoint& p : c_.output_qubit_ports())
      keep_q.push_back(out_qubit_.at({p.node, p.port}));

    RunResult result;
    DensityOp full(SpaceShape(dims_), rho_);
    result.averaged = partial_trace(full, keep_q);

    if (opt_.mode == RunOptions::Mode::Sample) {
      result.classical_dist[out_bits_sample_] = 1.0;
      result.branches.push_back(
          BranchResult{out_bits_sample_, 1.0, result.averaged});
      return result;
    }

    std::vector<int> bit_factors;
    for (const Endpoint& p : c_.output_bit_ports())
      bit_factors.push_back(out_bit_.at({p.node, p.port}));
    size_t nb = bit_factors.size();
    auto st = kernels::strides(dims_);
    for (size_t assignment = 0; assignment < (size_t(1) << nb); ++assignment) {
      Matrix projected = rho_;
      for (size_t i = 0; i < nb; ++i) {
        int f = bit_factors[i];
        Index want = (assignment >> i) & 1;
        for (Index col = 0; col < projected.cols(); ++col)
          for (Index row = 0; row < projected.rows(); ++row)
            if ((row / st[f]) % dims_[f] != want ||
                (col / st[f]) % dims_[f] != want)
              projected(row, col) = 0;
      }
      DensityOp sigma =
          partial_trace(DensityOp(SpaceShape(dims_), projected), keep_q);
      double p = sigma.trace_real();
      if (p < 1e-15) continue;
      std::string bits(nb, '0');
      for (size_t i = 0; i < nb; ++i)
        if ((assignment >> i) & 1) bits[i] = '1';
      result.classical_dist[bits] = p;
      result.branches.push_back(
          BranchResult{bits, p, DensityOp(sigma.shape, sigma.entries / p)});
    }
    return result;
  }

 private:
  struct QWire {
    int qubit = -1;
    int germ = -1;  // -1 when running without a germ model
  };

  void init_inputs(const Matrix& qubit_input, const std::vector<int>& bit_input) {
    auto qports = c_.input_qubit_ports();
    auto bports = c_.input_bit_ports();
    Index want = Index(1) << qports.size();
    if (qubit_input.rows() != want || qubit_input.cols() != want)
      throw Error("input state dimension does not match the input qubit ports");
    if (bit_input.size() != bports.size())
      throw Error("input bit count does not match the input bit ports");

    if (!qports.empty()) {
      attach(qubit_input, std::vector<Index>(qports.size(), 2));
      for (size_t i = 0; i < qports.size(); ++i) {
        QWire w;
        w.qubit = static_cast<int>(i);
        if (model_) {
          Vector g = model_->g0_for(qports[i].node);
          attach(g * g.adjoint(), {model_->dim});
          w.germ = static_cast<int>(dims_.size()) - 1;
        }
        qw_[edge_from(qports[i])] = w;
      }
    }
    for (size_t i = 0; i < bports.size(); ++i) {
      int v = bit_input[i];
      if (v != 0 && v != 1) throw Error("input bits must be 0 or 1");
      EdgeId e = edge_from(bports[i]);
      if (opt_.mode == RunOptions::Mode::Sample) {
        bval_[e] = v;
      } else {
        Matrix b = Matrix::Zero(2, 2);
        b(v, v) = 1;
        attach(b, {2});
        bw_[e] = static_cast<int>(dims_.size()) - 1;
      }
    }
  }

  void schedule() {
    std::map<NodeId, int> indegree;
    for (const Node& n : c_.nodes) indegree[n.id] = 0;
    for (const Edge& e : c_.edges) indegree[e.to.node]++;

    auto rank = [&](NodeId id) {
      return std::visit(
          [](const auto& g) -> int {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, InputNode>) return 0;
            if constexpr (std::is_same_v<T, MeasureZ>) return 1;
            if constexpr (std::is_same_v<T, ClassicalDet>) return 2;
            if constexpr (std::is_same_v<T, UnitaryGate>) return 3;
            if constexpr (std::is_same_v<T, OutputNode>) return 4;
            if constexpr (std::is_same_v<T, InitZero>) return 5;
          },
          c_.node(id).kind);
    };
    // Greedy topological execution: prefer nodes that shrink the live state
    // (measurements first) and delay fresh allocations (InitZero last).
    std::vector<NodeId> ready;
    for (auto& [id, deg] : indegree)
      if (deg == 0) ready.push_back(id);
    size_t executed = 0;
    while (!ready.empty()) {
      size_t best = 0;
      for (size_t i = 1; i < ready.size(); ++i) {
        int ri = rank(ready[i]), rb = rank(ready[best]);
        if (ri < rb || (ri == rb && ready[i] < ready[best])) best = i;
      }
      NodeId id = ready[best];
      ready.erase(ready.begin() + best);
      execute(id);
      ++executed;
      for (const Edge* e : out_by_[id])
        if (--indegree[e->to.node] == 0) ready.push_back(e->to.node);
    }
    if (executed != c_.nodes.size()) throw Error("circuit has a cycle");
  }

  void execute(NodeId id) {
    const Node& n = c_.node(id);
    std::vector<const Edge*> ins = in_by_[id];
    std::sort(ins.begin(), ins.end(),
              [](const Edge* a, const Edge* b) { return a->to.port < b->to.port; });

    // Every qubit edge carries its error operator, applied when consumed.
    if (model_)
      for (const Edge* e : ins)
        if (e->kind == EdgeKind::Qubit) {
          const QWire& w = qw_.at(e->id);
          kernels::conjugate_op(model_->error_for(e->id), rho_, dims_,
                                {w.germ, w.qubit});
        }

    std::visit(
        [&](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, InputNode>) {
            // Handled during init.
          } else if constexpr (std::is_same_v<T, InitZero>) {
            Matrix zero = Matrix::Zero(2, 2);
            zero(0, 0) = 1;
            attach(zero, {2});
            QWire w;
            w.qubit = static_cast<int>(dims_.size()) - 1;
            if (model_) {
              Vector g0 = model_->g0_for(id);
              attach(g0 * g0.adjoint(), {model_->dim});
              w.germ = static_cast<int>(dims_.size()) - 1;
            }
            qw_[out_edge(id, 0)] = w;
          } else if constexpr (std::is_same_v<T, MeasureZ>) {
            QWire w = qw_.at(ins[0]->id);
            qw_.erase(ins[0]->id);
            if (model_) {
              kernels::conjugate_op(model_->mixer_for(id, 1), rho_, dims_,
                                    {w.germ});
            }
            EdgeId out = out_edge(id, 0);
            if (opt_.mode == RunOptions::Mode::Sample) {
              bval_[out] = sample_and_project(w.qubit);
              int q = w.qubit;
              if (w.germ >= 0) {
                remove_factor(std::max(w.qubit, w.germ));
                q = std::min(w.qubit, w.germ);
              }
              remove_factor(q);
            } else {
              kernels::dephase_factor(rho_, dims_, w.qubit);
              int bit = w.qubit;
              if (w.germ >= 0) {
                remove_factor(w.germ);
                if (w.germ < bit) --bit;
              }
              bw_[out] = bit;
            }
          } else if constexpr (std::is_same_v<T, ClassicalDet>) {
            run_classical(id, g, ins);
          } else if constexpr (std::is_same_v<T, UnitaryGate>) {
            run_unitary(id, g, ins);
          } else if constexpr (std::is_same_v<T, OutputNode>) {
            for (const Edge* e : ins) {
              std::pair<NodeId, int> port{id, e->to.port};
              if (e->kind == EdgeKind::Qubit) {
                QWire w = qw_.at(e->id);
                qw_.erase(e->id);
                out_qubit_[port] = w.qubit;
                out_germ_[port] = w.germ;
              } else if (opt_.mode == RunOptions::Mode::Sample) {
                out_bit_value_[port] = bval_.at(e->id);
              } else {
                out_bit_[port] = bw_.at(e->id);
              }
            }
            if (opt_.mode == RunOptions::Mode::Sample) rebuild_sample_bits();
          }
        },
        n.kind);
  }

  void run_classical(NodeId id, const ClassicalDet& g,
                     const std::vector<const Edge*>& ins) {
    if (opt_.mode == RunOptions::Mode::Sample) {
      uint32_t x = 0;
      for (int i = 0; i < g.n_in; ++i)
        if (bval_.at(ins[i]->id)) x |= uint32_t(1) << i;
      uint32_t y = g.table[x];
      for (int j = 0; j < g.n_out; ++j)
        bval_[out_edge(id, j)] = (y >> j) & 1;
      for (const Edge* e : ins) bval_.erase(e->id);
      return;
    }
    // Fresh |0> output bits plus the permutation |x,y> -> |x, y ^ f(x)>
    // reproduce the table exactly on dephased inputs; the inputs are then
    // traced out.
    std::vector<int> in_factors;
    for (const Edge* e : ins) in_factors.push_back(bw_.at(e->id));
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1;
    std::vector<int> out_factors;
    for (int j = 0; j < g.n_out; ++j) {
      attach(zero, {2});
      out_factors.push_back(static_cast<int>(dims_.size()) - 1);
    }
    int n = g.n_in, m = g.n_out;
    Index dim = Index(1) << (n + m);
    Matrix v = Matrix::Zero(dim, dim);
    for (Index z = 0; z < dim; ++z) {
      uint32_t x = 0;
      for (int i = 0; i < n; ++i)
        if ((z >> (n + m - 1 - i)) & 1) x |= uint32_t(1) << i;
      uint32_t y = g.table[x];
      Index zp = z;
      for (int j = 0; j < m; ++j)
        if ((y >> j) & 1) zp ^= Index(1) << (m - 1 - j);
      v(zp, z) = 1;
    }
    std::vector<int> targets = in_factors;
    targets.insert(targets.end(), out_factors.begin(), out_factors.end());
    kernels::conjugate_op(v, rho_, dims_, targets);
    for (int j = 0; j < m; ++j) bw_[out_edge(id, j)] = out_factors[j];
    std::sort(in_factors.rbegin(), in_factors.rend());
    for (int f : in_factors) remove_factor(f);
    for (const Edge* e : ins) bw_.erase(e->id);
  }

  void run_unitary(NodeId id, const UnitaryGate& g,
                   const std::vector<const Edge*>& ins) {
    int c = g.controls, k = g.qubits;
    std::vector<QWire> wires;
    for (int i = 0; i < k; ++i) wires.push_back(qw_.at(ins[c + i]->id));

    if (model_ && model_->dim > 1) {
      std::vector<int> germ_targets;
      for (const QWire& w : wires) germ_targets.push_back(w.germ);
      kernels::conjugate_op(model_->mixer_for(id, k), rho_, dims_,
                            germ_targets);
    }

    std::vector<int> qubit_targets;
    for (const QWire& w : wires) qubit_targets.push_back(w.qubit);

    // Re-home the wires before any factor removal below; remove_factor
    // keeps map entries consistent, while local copies would go stale.
    for (int i = 0; i < k; ++i) {
      qw_.erase(ins[c + i]->id);
      qw_[out_edge(id, i)] = wires[i];
    }

    if (opt_.mode == RunOptions::Mode::Sample) {
      bool fire = true;
      for (int i = 0; i < c; ++i) fire = fire && bval_.at(ins[i]->id) == 1;
      if (fire) kernels::conjugate_op(g.matrix, rho_, dims_, qubit_targets);
      for (int i = 0; i < c; ++i) bval_.erase(ins[i]->id);
    } else if (c == 0) {
      kernels::conjugate_op(g.matrix, rho_, dims_, qubit_targets);
    } else {
      Index qd = Index(1) << k;
      Index dim = (Index(1) << c) * qd;
      Matrix cu = Matrix::Identity(dim, dim);
      Index ones = ((Index(1) << c) - 1) * qd;
      cu.block(ones, ones, qd, qd) = g.matrix;
      std::vector<int> targets;
      std::vector<int> controls;
      for (int i = 0; i < c; ++i) {
        targets.push_back(bw_.at(ins[i]->id));
        controls.push_back(bw_.at(ins[i]->id));
      }
      targets.insert(targets.end(), qubit_targets.begin(), qubit_targets.end());
      kernels::conjugate_op(cu, rho_, dims_, targets);
      for (int i = 0; i < c; ++i) bw_.erase(ins[i]->id);
      std::sort(controls.rbegin(), controls.rend());
      for (int f : controls) remove_factor(f);
    }
  }

  void rebuild_sample_bits() {
    auto bports = c_.output_bit_ports();
    out_bits_sample_.assign(bports.size(), '0');
    for (size_t i = 0; i < bports.size(); ++i) {
      auto it = out_bit_value_.find({bports[i].node, bports[i].port});
      if (it != out_bit_value_.end() && it->second) out_bits_sample_[i] = '1';
    }
  }

  int sample_and_project(int factor) {
    auto st = kernels::strides(dims_);
    double p0 = 0, total = 0;
    for (Index i = 0; i < rho_.rows(); ++i) {
      double d = rho_(i, i).real();
      total += d;
      if ((i / st[factor]) % dims_[factor] == 0) p0 += d;
    }
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    int outcome = dist(rng_) * total < p0 ? 0 : 1;
    double p = outcome == 0 ? p0 : total - p0;
    if (p <= 0) throw Error("zero-probability measurement branch");
    for (Index col = 0; col < rho_.cols(); ++col)
      for (Index row = 0; row < rho_.rows(); ++row)
        if ((row / st[factor]) % dims_[factor] != Index(outcome) ||
            (col / st[factor]) % dims_[factor] != Index(outcome))
          rho_(row, col) = 0;
    rho_ /= p;
    return outcome;
  }

  void attach(const Matrix& m, const std::vector<Index>& new_dims) {
    rho_ = kron(rho_, m);
    dims_.insert(dims_.end(), new_dims.begin(), new_dims.end());
    if (kernels::total_dim(dims_) > opt_.max_dim)
      throw Error("live dimension budget exceeded (" +
                  std::to_string(kernels::total_dim(dims_)) + " > " +
                  std::to_string(opt_.max_dim) + "); raise the budget");
  }

  void remove_factor(int f) {
    rho_ = kernels::trace_factor(rho_, dims_, f);
    dims_.erase(dims_.begin() + f);
    auto shift = [f](int& x) {
      if (x > f) --x;
    };
    for (auto& [e, w] : qw_) {
      shift(w.qubit);
      shift(w.germ);
    }
    for (auto& [e, b] : bw_) shift(b);
    for (auto& [p, q] : out_qubit_) shift(q);
    for (auto& [p, g] : out_germ_) shift(g);
    for (auto& [p, b] : out_bit_) shift(b);
  }

  EdgeId out_edge(NodeId id, int port) const {
    for (const Edge* e : out_by_.at(id))
      if (e->from.port == port) return e->id;
    throw Error("unconnected output port during execution");
  }

  EdgeId edge_from(const Endpoint& p) const {
    for (const Edge& e : c_.edges)
      if (e.from == p) return e.id;
    throw Error("unconnected boundary port");
  }

  const MixedCircuit& c_;
  const GermModel* model_;
  RunOptions opt_;
  bool channel_;
  std::mt19937_64 rng_;
  std::map<NodeId, std::vector<const Edge*>> in_by_, out_by_;

  Matrix rho_;
  std::vector<Index> dims_;
  std::map<EdgeId, QWire> qw_;
  std::map<EdgeId, int> bw_;
  std::map<EdgeId, int> bval_;
  std::map<std::pair<NodeId, int>, int> out_qubit_, out_germ_, out_bit_;
  std::map<std::pair<NodeId, int>, int> out_bit_value_;
  std::string out_bits_sample_;
};

inline Matrix input_density(const MixedCircuit& c, const RunInput& in) {
  size_t nq = c.input_qubit_ports().size();
  if (nq == 0) {
    if (in.state.amps.size() > 1)
      throw Error("circuit has no input qubit ports");
    return Matrix::Ones(1, 1);
  }
  Index want = Index(1) << nq;
  if (in.state.amps.size() != want)
    throw Error("input state dimension does not match the input qubit ports");
  return in.state.amps * in.state.amps.adjoint();
}

}  // namespace sim_detail

inline RunResult run_pure(const MixedCircuit& c, const RunInput& in,
                          const RunOptions& opt = {}) {
  require_valid(c);
  sim_detail::DensityEngine engine(c, nullptr, opt, false);
  engine.run(sim_detail::input_density(c, in), in.bits);
  return engine.finish();
}

inline RunResult run_infected(const InfectedCircuit& ic, const RunInput& in,
                              const RunOptions& opt = {}) {
  require_valid(ic.base);
  ic.model.check();
  sim_detail::DensityEngine engine(ic.base, &ic.model, opt, false);
  engine.run(sim_detail::input_density(ic.base, in), in.bits);
  return engine.finish();
}

/// Applies the circuit's channel to an arbitrary matrix on the input qubit
/// ports (by linearity; the matrix need not be a state). Used by tomography.
inline Matrix apply_channel(const MixedCircuit& c, const GermModel* model,
                            const Matrix& input,
                            const std::vector<int>& bits = {},
                            const RunOptions& opt = {}) {
  RunOptions o = opt;
  o.mode = RunOptions::Mode::Branch;
  sim_detail::DensityEngine engine(c, model, o, true);
  engine.run(input, bits);
  return engine.channel_output();
}

// ---------------------------------------------------------------------------
// Process tomography
// ---------------------------------------------------------------------------

/// Column-stacked superoperator: column (j*D_in + i) is vec of the channel
/// applied to |i><j|, with vec(A)[c*D + r] = A(r, c).
struct ProcessMatrix {
  Index dim_in = 1;
  Index dim_out = 1;
  Matrix superop;  // (dim_out^2) x (dim_in^2)

  Matrix apply(const Matrix& rho) const {
    if (rho.rows() != dim_in || rho.cols() != dim_in)
      throw Error("ProcessMatrix::apply: dimension mismatch");
    Vector v(dim_in * dim_in);
    for (Index c = 0; c < dim_in; ++c)
      for (Index r = 0; r < dim_in; ++r) v[c * dim_in + r] = rho(r, c);
    Vector w = superop * v;
    Matrix out(dim_out, dim_out);
    for (Index c = 0; c < dim_out; ++c)
      for (Index r = 0; r < dim_out; ++r) out(r, c) = w[c * dim_out + r];
    return out;
  }

  /// Choi matrix sum_ij channel(|i><j|) (x) |i><j| on dim_out*dim_in.
  Matrix choi() const {
    Index d = dim_out * dim_in;
    Matrix c = Matrix::Zero(d, d);
    for (Index j = 0; j < dim_in; ++j)
      for (Index i = 0; i < dim_in; ++i) {
        const auto col = superop.col(j * dim_in + i);
        for (Index s = 0; s < dim_out; ++s)
          for (Index r = 0; r < dim_out; ++r)
            c(r * dim_in + i, s * dim_in + j) += col[s * dim_out + r];
      }
    return c;
  }

  bool is_trace_preserving(double tol = kStateTol) const {
    for (Index j = 0; j < dim_in; ++j)
      for (Index i = 0; i < dim_in; ++i) {
        Complex tr = 0;
        for (Index r = 0; r < dim_out; ++r)
          tr += superop(r * dim_out + r, j * dim_in + i);
        Complex want = i == j ? Complex(1, 0) : Complex(0, 0);
        if (std::abs(tr - want) > tol) return false;
      }
    return true;
  }

  bool is_completely_positive(double floor = -kStateTol) const {
    Matrix c = choi();
    Matrix h = (c + c.adjoint()) / 2.0;
    if ((c - h).cwiseAbs().maxCoeff() > 1e-7) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= floor;
  }
};

inline double superop_distance(const ProcessMatrix& a, const ProcessMatrix& b) {
  if (a.superop.rows() != b.superop.rows() ||
      a.superop.cols() != b.superop.cols())
    throw Error("superop_distance: shape mismatch");
  return (a.superop - b.superop).cwiseAbs().maxCoeff();
}

inline ProcessMatrix identity_process(Index dim) {
  ProcessMatrix p;
  p.dim_in = p.dim_out = dim;
  p.superop = Matrix::Identity(dim * dim, dim * dim);
  return p;
}

inline ProcessMatrix tomography(const MixedCircuit& c,
                                const GermModel* model = nullptr,
                                int max_qubits = 3,
                                const RunOptions& opt = {}) {
  require_valid(c);
  size_t nq_in = c.input_qubit_ports().size();
  size_t nq_out = c.output_qubit_ports().size();
  if (static_cast<int>(nq_in) > max_qubits)
    throw Error("tomography: circuit exceeds the logical qubit guard");
  if (!c.input_bit_ports().empty())
    throw Error("tomography: circuit has input bit ports; fix them via run_*");

  ProcessMatrix p;
  p.dim_in = Index(1) << nq_in;
  p.dim_out = Index(1) << nq_out;
  p.superop = Matrix::Zero(p.dim_out * p.dim_out, p.dim_in * p.dim_in);
  for (Index j = 0; j < p.dim_in; ++j)
    for (Index i = 0; i < p.dim_in; ++i) {
      Matrix basis = Matrix::Zero(p.dim_in, p.dim_in);
      basis(i, j) = 1;
      Matrix out = apply_channel(c, model, basis, {}, opt);
      for (Index s = 0; s < p.dim_out; ++s)
        for (Index r = 0; r < p.dim_out; ++r)
          p.superop(s * p.dim_out + r, j * p.dim_in + i) = out(r, s);
    }
  return p;
}

/// <psi|rho|psi>.
inline double fidelity(const DensityOp& rho, const Vector& psi) {
  if (rho.entries.rows() != psi.size())
    throw Error("fidelity: dimension mismatch");
  return (psi.adjoint() * rho.entries * psi)(0, 0).real();
}

}  // namespace qgerm

#endif  // QGERM_SIM_HPP
