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

#ifndef QGERM_NOISE_HPP
#define QGERM_NOISE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "qgerm/sim.hpp"
#include "qgerm/transpile.hpp"

namespace qgerm {

// ---------------------------------------------------------------------------
// Pauli decomposition of edge errors
// ---------------------------------------------------------------------------

/// E = sum_j comp[j] (x) P_j with subunitary germ-space components.
struct EdgeDecomposition {
  Index dim = 1;  // germ dimension
  std::array<Matrix, 4> comp;

  Matrix reconstruct() const {
    Matrix out = Matrix::Zero(2 * dim, 2 * dim);
    for (int j = 0; j < 4; ++j)
      out += sim_detail::kron(comp[j], gates::pauli(j));
    return out;
  }
};

inline EdgeDecomposition pauli_decompose(const Matrix& e) {
  if (e.rows() != e.cols() || e.rows() % 2 != 0 || e.rows() < 2)
    throw Error("pauli_decompose: operator must act on germ (x) qubit");
  EdgeDecomposition dec;
  dec.dim = e.rows() / 2;
  for (int j = 0; j < 4; ++j) {
    const Matrix& p = gates::pauli(j);
    Matrix c(dec.dim, dec.dim);
    for (Index g = 0; g < dec.dim; ++g)
      for (Index h = 0; h < dec.dim; ++h)
        c(g, h) = 0.5 * (e.block(2 * g, 2 * h, 2, 2) * p).trace();
    dec.comp[j] = std::move(c);
  }
  return dec;
}

/// Seminorm of the error on germ state g: sum over the three non-identity
/// branches of their amplitude.
inline double error_seminorm(const EdgeDecomposition& dec, const Vector& g) {
  if (g.size() != dec.dim) throw Error("error_seminorm: dimension mismatch");
  double s = 0;
  for (int j = 1; j < 4; ++j) s += (dec.comp[j] * g).norm();
  return s;
}

/// Seminorm of an edge's error on a fresh default germ (diagnostic; the
/// delta profile below uses the actual entangled germ state instead).
inline double fresh_germ_seminorm(const GermModel& m, EdgeId edge) {
  return error_seminorm(pauli_decompose(m.error_for(edge)), m.g0);
}

// ---------------------------------------------------------------------------
// Germ-sector program: the circuit reduced to what touches germs
// ---------------------------------------------------------------------------

namespace noise_detail {

struct Step {
  enum class Kind { Spawn, Edge, Mix };
  Kind kind;
  NodeId site = -1;        // spawn or mix site
  EdgeId edge = -1;        // edge steps
  int germ = -1;           // germ index: the spawned one, or the edge's rider
  std::vector<int> germs;  // mixer targets, gate port order
};

struct GermProgram {
  std::vector<Step> steps;
  int num_germs = 0;
  std::vector<NodeId> spawn_site;  // germ index -> spawning node
  std::vector<int> last_use;       // germ index -> last step touching it
};

/// Linearizes the germ-relevant operations in deterministic topological
/// order. The full evolution operator does not depend on the order chosen
/// (concurrent operations act on disjoint factors), so any topological
/// order represents the circuit.
inline GermProgram build_program(const MixedCircuit& c) {
  GermProgram prog;
  auto in_by = detail::in_edges_by_node(c);
  auto out_by = detail::out_edges_by_node(c);
  std::map<EdgeId, int> germ_of_edge;

  auto spawn = [&](NodeId site) {
    int g = prog.num_germs++;
    prog.spawn_site.push_back(site);
    Step s;
    s.kind = Step::Kind::Spawn;
    s.site = site;
    s.germ = g;
    prog.steps.push_back(s);
    return g;
  };
  auto out_edge = [&](NodeId id, int port) -> EdgeId {
    for (const Edge* e : out_by[id])
      if (e->from.port == port) return e->id;
    throw Error("unconnected output port");
  };

  for (NodeId id : detail::topological_order(c)) {
    const Node& n = c.node(id);
    std::vector<const Edge*> ins = in_by[id];
    std::sort(ins.begin(), ins.end(), [](const Edge* a, const Edge* b) {
      return a->to.port < b->to.port;
    });
    std::vector<int> in_germs;
    for (const Edge* e : ins) {
      if (e->kind != EdgeKind::Qubit) continue;
      int g = germ_of_edge.at(e->id);
      Step s;
      s.kind = Step::Kind::Edge;
      s.edge = e->id;
      s.germ = g;
      prog.steps.push_back(s);
      in_germs.push_back(g);
    }
    std::visit(
        [&](const auto& gk) {
          using T = std::decay_t<decltype(gk)>;
          if constexpr (std::is_same_v<T, InputNode>) {
            for (int p = 0; p < static_cast<int>(gk.ports.size()); ++p)
              if (gk.ports[p] == EdgeKind::Qubit)
                germ_of_edge[out_edge(id, p)] = spawn(id);
          } else if constexpr (std::is_same_v<T, InitZero>) {
            germ_of_edge[out_edge(id, 0)] = spawn(id);
          } else if constexpr (std::is_same_v<T, MeasureZ> ||
                               std::is_same_v<T, UnitaryGate>) {
            Step s;
            s.kind = Step::Kind::Mix;
            s.site = id;
            s.germs = in_germs;
            prog.steps.push_back(s);
            if constexpr (std::is_same_v<T, UnitaryGate>)
              for (int i = 0; i < gk.qubits; ++i)
                germ_of_edge[out_edge(id, i)] = in_germs[i];
          }
        },
        n.kind);
  }
  prog.last_use.assign(prog.num_germs, -1);
  for (size_t i = 0; i < prog.steps.size(); ++i) {
    const Step& s = prog.steps[i];
    if (s.kind == Step::Kind::Spawn || s.kind == Step::Kind::Edge)
      prog.last_use[s.germ] = static_cast<int>(i);
    else
      for (int g : s.germs) prog.last_use[g] = static_cast<int>(i);
  }
  return prog;
}

/// Density matrix over the currently live germs. Germs are traced out as
/// soon as no later step can touch them, which keeps the live dimension
/// bounded by the circuit's locality instead of its total germ count; the
/// total trace (the squared branch amplitude) is unaffected because every
/// later operation acts on other factors.
struct GermDensity {
  Matrix rho;
  std::vector<Index> dims;
  std::vector<int> factor_of_germ;  // germ index -> live factor or -1

  GermDensity(int num_germs, Index max_dim)
      : factor_of_germ(num_germs, -1), max_dim_(max_dim) {
    rho = Matrix::Ones(1, 1);
  }

  void spawn(int germ, const Vector& g0) {
    rho = sim_detail::kron(rho, Matrix(g0 * g0.adjoint()));
    dims.push_back(g0.size());
    factor_of_germ[germ] = static_cast<int>(dims.size()) - 1;
    if (kernels::total_dim(dims) > max_dim_)
      throw Error("germ-sector dimension budget exceeded");
  }

  void apply(const Matrix& op, const std::vector<int>& germs) {
    std::vector<int> targets;
    for (int g : germs) targets.push_back(factor_of_germ[g]);
    kernels::conjugate_op(op, rho, dims, targets);
  }

  void trace_out(int germ) {
    int f = factor_of_germ[germ];
    rho = kernels::trace_factor(rho, dims, f);
    dims.erase(dims.begin() + f);
    factor_of_germ[germ] = -1;
    for (int& x : factor_of_germ)
      if (x > f) --x;
  }

  double total() const { return rho.trace().real(); }

 private:
  Index max_dim_;
};

/// Pure-state variant keeping every germ to the end (used when the branch
/// vectors themselves are wanted).
struct GermState {
  Vector v;
  std::vector<Index> dims;
  std::vector<int> factor_of_germ;

  explicit GermState(int num_germs) : factor_of_germ(num_germs, -1) {
    v = Vector::Ones(1);
  }

  void spawn(int germ, const Vector& g0) {
    Vector nv(v.size() * g0.size());
    for (Index i = 0; i < v.size(); ++i)
      nv.segment(i * g0.size(), g0.size()) = v[i] * g0;
    v = std::move(nv);
    dims.push_back(g0.size());
    factor_of_germ[germ] = static_cast<int>(dims.size()) - 1;
  }

  void apply(const Matrix& op, const std::vector<int>& germs) {
    std::vector<int> targets;
    for (int g : germs) targets.push_back(factor_of_germ[g]);
    kernels::apply_op_vec(op, v, dims, targets);
  }
};

}  // namespace noise_detail

// ---------------------------------------------------------------------------
// Pauli patterns, local firsts
// ---------------------------------------------------------------------------

/// Precedence between qubit edges: a comes before b when a directed qubit
/// path leads from a's head to b's tail (or they are consecutive).
class EdgeOrder {
 public:
  explicit EdgeOrder(const MixedCircuit& c) {
    for (const Edge& e : c.edges)
      if (e.kind == EdgeKind::Qubit) edges_.push_back(e);
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (size_t i = 0; i < edges_.size(); ++i) slot_[edges_[i].id] = i;
    // Qubit-edge reachability closure between nodes, including trivially
    // reaching oneself.
    std::map<NodeId, std::set<NodeId>> reach;
    for (const Node& n : c.nodes) {
      std::vector<NodeId> frontier{n.id};
      std::set<NodeId>& seen = reach[n.id];
      seen.insert(n.id);
      while (!frontier.empty()) {
        NodeId cur = frontier.back();
        frontier.pop_back();
        for (const Edge& e : edges_)
          if (e.from.node == cur && !seen.count(e.to.node)) {
            seen.insert(e.to.node);
            frontier.push_back(e.to.node);
          }
      }
    }
    size_t n = edges_.size();
    before_.assign(n, std::vector<bool>(n, false));
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        if (a != b)
          before_[a][b] =
              reach[edges_[a].to.node].count(edges_[b].from.node) > 0;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  size_t slot_of(EdgeId id) const {
    auto it = slot_.find(id);
    if (it == slot_.end()) throw Error("unknown qubit edge id");
    return it->second;
  }
  bool before(size_t a, size_t b) const { return before_[a][b]; }

  /// Locally first slots of a support set (slots with no earlier support).
  std::vector<size_t> locally_first_slots(
      const std::vector<size_t>& support) const {
    std::vector<size_t> out;
    for (size_t a : support) {
      bool first = true;
      for (size_t b : support)
        if (b != a && before_[b][a]) {
          first = false;
          break;
        }
      if (first) out.push_back(a);
    }
    return out;
  }

 private:
  std::vector<Edge> edges_;
  std::map<EdgeId, size_t> slot_;
  std::vector<std::vector<bool>> before_;
};

/// Per-pattern data. paulis[i] is the Pauli index on the i-th qubit edge in
/// ascending edge-id order.
struct PatternEntry {
  std::vector<uint8_t> paulis;
  double amplitude = 0;
  int weight = 0;
  int m = 0;
  std::vector<EdgeId> locally_first;
  Vector state;  // germ-sector vector, only when keep_states was requested
};

inline std::string pattern_string(const std::vector<uint8_t>& paulis) {
  static const char kNames[] = "IXYZ";
  std::string s;
  for (uint8_t p : paulis) s.push_back(kNames[p & 3]);
  return s;
}

struct PauliExpansion {
  std::vector<EdgeId> edge_order;  // ascending qubit edge ids
  std::vector<PatternEntry> entries;

  const PatternEntry* find(const std::string& pattern) const {
    for (const PatternEntry& e : entries)
      if (pattern_string(e.paulis) == pattern) return &e;
    return nullptr;
  }
};

struct ExpandOptions {
  size_t max_edges = 8;      // 4^8 = 65536 patterns before pruning
  double prune_tol = 1e-14;  // drop branches with negligible amplitude
  bool keep_states = false;  // keep the full germ vector per branch
  Index max_dim = Index(1) << 14;
};

/// Locally first diseased edges of a pattern and their count m(J).
inline std::vector<EdgeId> locally_first(const std::map<EdgeId, int>& pattern,
                                         const MixedCircuit& c) {
  EdgeOrder order(c);
  std::vector<size_t> support;
  for (const auto& [id, p] : pattern)
    if (p != 0) support.push_back(order.slot_of(id));
  std::vector<EdgeId> out;
  for (size_t s : order.locally_first_slots(support))
    out.push_back(order.edges()[s].id);
  return out;
}

/// Expands the infected circuit's total error into multi-Pauli branches:
/// for each assignment of a Pauli component to every qubit edge, the germ
/// sector evolves through mixers and the selected subunitary components;
/// the branch amplitude is the final norm. Zero branches are pruned during
/// the depth-first sweep, so models with sparse components stay cheap even
/// on circuits with many edges.
inline PauliExpansion multipauli_expand(const InfectedCircuit& ic,
                                        const ExpandOptions& opt = {}) {
  require_valid(ic.base);
  const MixedCircuit& c = ic.base;
  const GermModel& m = ic.model;
  EdgeOrder order(c);
  size_t n_edges = order.edges().size();
  if (n_edges > opt.max_edges)
    throw Error("multipauli_expand: " + std::to_string(n_edges) +
                " qubit edges exceed the cap of " +
                std::to_string(opt.max_edges));

  noise_detail::GermProgram prog = noise_detail::build_program(c);
  std::map<EdgeId, EdgeDecomposition> decs;
  for (const Edge& e : order.edges())
    decs.emplace(e.id, pauli_decompose(m.error_for(e.id)));

  PauliExpansion out;
  for (const Edge& e : order.edges()) out.edge_order.push_back(e.id);

  std::vector<uint8_t> assignment(n_edges, 0);
  auto record = [&](double amplitude, const Vector* state) {
    if (amplitude <= opt.prune_tol) return;
    PatternEntry entry;
    entry.paulis = assignment;
    entry.amplitude = amplitude;
    std::vector<size_t> support;
    for (size_t i = 0; i < n_edges; ++i)
      if (assignment[i] != 0) {
        ++entry.weight;
        support.push_back(i);
      }
    for (size_t s : order.locally_first_slots(support))
      entry.locally_first.push_back(order.edges()[s].id);
    entry.m = static_cast<int>(entry.locally_first.size());
    if (state) entry.state = *state;
    out.entries.push_back(std::move(entry));
  };

  if (opt.keep_states) {
    std::function<void(size_t, const noise_detail::GermState&)> dfs =
        [&](size_t step, const noise_detail::GermState& state) {
          if (step == prog.steps.size()) {
            record(state.v.norm(), &state.v);
            return;
          }
          const noise_detail::Step& s = prog.steps[step];
          noise_detail::GermState next = state;
          switch (s.kind) {
            case noise_detail::Step::Kind::Spawn:
              next.spawn(s.germ, m.g0_for(s.site));
              dfs(step + 1, next);
              break;
            case noise_detail::Step::Kind::Mix:
              next.apply(m.mixer_for(s.site, static_cast<int>(s.germs.size())),
                         s.germs);
              dfs(step + 1, next);
              break;
            case noise_detail::Step::Kind::Edge: {
              size_t slot = order.slot_of(s.edge);
              for (int j = 0; j < 4; ++j) {
                noise_detail::GermState branch = state;
                branch.apply(decs.at(s.edge).comp[j], {s.germ});
                if (branch.v.norm() <= opt.prune_tol) continue;
                assignment[slot] = static_cast<uint8_t>(j);
                dfs(step + 1, branch);
              }
              assignment[slot] = 0;
              break;
            }
          }
        };
    dfs(0, noise_detail::GermState(prog.num_germs));
  } else {
    // Density form with progressive tracing keeps the live dimension small
    // on long circuits.
    std::function<void(size_t, const noise_detail::GermDensity&)> dfs =
        [&](size_t step, const noise_detail::GermDensity& state) {
          if (step == prog.steps.size()) {
            record(std::sqrt(std::max(0.0, state.total())), nullptr);
            return;
          }
          const noise_detail::Step& s = prog.steps[step];
          auto advance = [&](noise_detail::GermDensity& next) {
            if (s.kind == noise_detail::Step::Kind::Spawn ||
                s.kind == noise_detail::Step::Kind::Edge) {
              if (prog.last_use[s.germ] == static_cast<int>(step))
                next.trace_out(s.germ);
            } else {
              for (int g : s.germs)
                if (prog.last_use[g] == static_cast<int>(step))
                  next.trace_out(g);
            }
            dfs(step + 1, next);
          };
          switch (s.kind) {
            case noise_detail::Step::Kind::Spawn: {
              noise_detail::GermDensity next = state;
              next.spawn(s.germ, m.g0_for(s.site));
              advance(next);
              break;
            }
            case noise_detail::Step::Kind::Mix: {
              noise_detail::GermDensity next = state;
              next.apply(m.mixer_for(s.site, static_cast<int>(s.germs.size())),
                         s.germs);
              advance(next);
              break;
            }
            case noise_detail::Step::Kind::Edge: {
              size_t slot = order.slot_of(s.edge);
              for (int j = 0; j < 4; ++j) {
                noise_detail::GermDensity branch = state;
                branch.apply(decs.at(s.edge).comp[j], {s.germ});
                if (branch.total() <= opt.prune_tol * opt.prune_tol) continue;
                assignment[slot] = static_cast<uint8_t>(j);
                advance(branch);
              }
              assignment[slot] = 0;
              break;
            }
          }
        };
    dfs(0, noise_detail::GermDensity(prog.num_germs, opt.max_dim));
  }

  // The all-identity branch is reported even if it pruned to zero.
  bool has_identity = false;
  for (const PatternEntry& e : out.entries)
    if (e.weight == 0) has_identity = true;
  if (!has_identity) {
    PatternEntry id_entry;
    id_entry.paulis.assign(n_edges, 0);
    out.entries.insert(out.entries.begin(), id_entry);
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const PatternEntry& a, const PatternEntry& b) {
              return a.paulis < b.paulis;
            });
  return out;
}

// ---------------------------------------------------------------------------
// Delta profile
// ---------------------------------------------------------------------------

struct DeltaProfile {
  std::vector<double> delta;  // delta[n], n = 0..n_max
  std::map<EdgeId, double> per_edge;
  std::map<EdgeId, int> edge_depth;

  double at(int n) const {
    if (n < 0) throw Error("delta profile: negative depth");
    if (static_cast<size_t>(n) < delta.size()) return delta[n];
    return delta.empty() ? 0.0 : delta.back();
  }
};

struct DeltaOptions {
  size_t cone_cap = 24;      // max branching edge steps upstream of one edge
  double prune_tol = 1e-14;
  Index max_dim = Index(1) << 14;
};

/// Worst-case error seminorm per upstream quantum depth. For each qubit
/// edge q, the germs that can still influence q's germ are evolved jointly
/// (as a density matrix, tracing germs once their influence window closes)
/// through mixers and all selections of upstream Pauli components; the
/// seminorm of q's error on the resulting subnormalized cluster state is
/// maximized. delta(n) is the running maximum over edges whose longest
/// incoming qubit path (including q itself) has at most n edges.
inline DeltaProfile delta_profile(const InfectedCircuit& ic, int n_max,
                                  const DeltaOptions& opt = {}) {
  require_valid(ic.base);
  const MixedCircuit& c = ic.base;
  const GermModel& m = ic.model;
  noise_detail::GermProgram prog = noise_detail::build_program(c);

  // Depth of a qubit edge: longest directed qubit path ending with it.
  auto torder = detail::topological_order(c);
  auto in_by = detail::in_edges_by_node(c);
  std::map<NodeId, int> qdist;
  for (NodeId id : torder) {
    int d = 0;
    for (const Edge* e : in_by[id])
      if (e->kind == EdgeKind::Qubit) d = std::max(d, qdist[e->from.node] + 1);
    qdist[id] = d;
  }

  std::map<EdgeId, EdgeDecomposition> decs;
  for (const Edge& e : c.edges)
    if (e.kind == EdgeKind::Qubit)
      decs.emplace(e.id, pauli_decompose(m.error_for(e.id)));

  DeltaProfile out;
  out.delta.assign(n_max + 1, 0.0);

  for (size_t qi = 0; qi < prog.steps.size(); ++qi) {
    const noise_detail::Step& qstep = prog.steps[qi];
    if (qstep.kind != noise_detail::Step::Kind::Edge) continue;
    EdgeId q = qstep.edge;
    int depth = qdist[c.edge(q).from.node] + 1;
    out.edge_depth[q] = depth;

    // drop[g]: last step index before qi whose execution still needs germ g
    // to influence q's germ; -1 when g never does. Backward influence walk.
    std::vector<int> drop(prog.num_germs, -1);
    drop[qstep.germ] = static_cast<int>(qi);
    for (size_t t = qi; t-- > 0;) {
      const noise_detail::Step& s = prog.steps[t];
      if (s.kind != noise_detail::Step::Kind::Mix) continue;
      bool touches = false;
      for (int g : s.germs)
        if (drop[g] >= static_cast<int>(t)) touches = true;
      if (!touches) continue;
      for (int g : s.germs)
        if (drop[g] < static_cast<int>(t)) drop[g] = static_cast<int>(t);
    }

    size_t branching = 0;
    for (size_t t = 0; t < qi; ++t) {
      const noise_detail::Step& s = prog.steps[t];
      if (s.kind == noise_detail::Step::Kind::Edge &&
          drop[s.germ] >= static_cast<int>(t))
        ++branching;
    }
    if (branching > opt.cone_cap)
      throw Error("delta_profile: interaction cone of edge " +
                  std::to_string(q) + " exceeds the cap");

    const EdgeDecomposition& dec = decs.at(q);
    double worst = 0;
    std::function<void(size_t, const noise_detail::GermDensity&)> dfs =
        [&](size_t step, const noise_detail::GermDensity& state) {
          if (step == qi) {
            double s = 0;
            for (int j = 1; j < 4; ++j) {
              noise_detail::GermDensity branch = state;
              branch.apply(dec.comp[j], {qstep.germ});
              s += std::sqrt(std::max(0.0, branch.total()));
            }
            worst = std::max(worst, s);
            return;
          }
          const noise_detail::Step& s = prog.steps[step];
          int germ = s.kind == noise_detail::Step::Kind::Mix ? -1 : s.germ;
          bool live = germ >= 0 && drop[germ] >= static_cast<int>(step);
          auto advance = [&](noise_detail::GermDensity& next) {
            if (s.kind == noise_detail::Step::Kind::Mix) {
              for (int g : s.germs)
                if (drop[g] == static_cast<int>(step)) next.trace_out(g);
            } else if (live && drop[germ] == static_cast<int>(step)) {
              next.trace_out(germ);
            }
            dfs(step + 1, next);
          };
          switch (s.kind) {
            case noise_detail::Step::Kind::Spawn: {
              noise_detail::GermDensity next = state;
              if (live) next.spawn(germ, m.g0_for(s.site));
              advance(next);
              break;
            }
            case noise_detail::Step::Kind::Mix: {
              bool relevant = false;
              for (int g : s.germs)
                if (drop[g] >= static_cast<int>(step)) relevant = true;
              noise_detail::GermDensity next = state;
              if (relevant)
                next.apply(
                    m.mixer_for(s.site, static_cast<int>(s.germs.size())),
                    s.germs);
              advance(next);
              break;
            }
            case noise_detail::Step::Kind::Edge: {
              if (!live) {
                // A full unitary error on an already-irrelevant germ leaves
                // the cluster state untouched; selected components could
                // only shrink it, so the maximum ignores them.
                noise_detail::GermDensity next = state;
                advance(next);
                break;
              }
              for (int j = 0; j < 4; ++j) {
                noise_detail::GermDensity branch = state;
                branch.apply(decs.at(s.edge).comp[j], {s.germ});
                if (branch.total() <= opt.prune_tol * opt.prune_tol) continue;
                advance(branch);
              }
              break;
            }
          }
        };
    dfs(0, noise_detail::GermDensity(prog.num_germs, opt.max_dim));
    out.per_edge[q] = worst;
    if (depth <= n_max)
      for (int n = depth; n <= n_max; ++n)
        out.delta[n] = std::max(out.delta[n], worst);
  }
  // Monotone by construction; make it explicit anyway.
  for (size_t n = 1; n < out.delta.size(); ++n)
    out.delta[n] = std::max(out.delta[n], out.delta[n - 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Bounds and checks
// ---------------------------------------------------------------------------

inline double bound_eps(double delta, double k, int n) {
  if (delta < 0 || delta > 1) throw Error("bound_eps: delta must be in [0,1]");
  if (k < 1) throw Error("bound_eps: k must be >= 1");
  if (n < 0) throw Error("bound_eps: n must be >= 0");
  return std::pow(delta, std::pow(k, -n));
}

inline double bound_gadget(double eps, bool tighten_by_3 = false) {
  if (eps < 0) throw Error("bound_gadget: eps must be >= 0");
  double b = std::pow(1.0 + 3.0 * eps, 8) - 1.0;
  return tighten_by_3 ? b / 3.0 : b;
}

struct Thm3Report {
  bool amplitude_pass = true;
  bool structural_pass = true;
  double delta_n = 0;
  int n = 0;
  int k_eff = 2;
  // Smallest margin of delta(n)^m - amplitude over all nonzero-weight
  // branches (can dip slightly negative within tolerance).
  double worst_amplitude_margin = 0;
  std::string worst_pattern;
  int amplitude_violations = 0;
  int structural_violations = 0;
};

/// Verifies amplitude <= delta(n)^m(J) and w(J) < k^n m(J) for every
/// expanded branch. The structural inequality is strict only for k >= 2
/// (a bare wire has k = 1 and w = m), so k is clamped below by 2.
inline Thm3Report check_amplitude_bounds(const PauliExpansion& expansion,
                                         const DeltaProfile& profile, int n,
                                         int k, double tol = kStateTol) {
  Thm3Report report;
  report.n = n;
  report.k_eff = std::max(2, k);
  report.delta_n = profile.at(n);
  double kn = std::pow(static_cast<double>(report.k_eff), n);
  bool first = true;
  for (const PatternEntry& e : expansion.entries) {
    if (e.weight == 0) continue;
    double bound = std::pow(report.delta_n, e.m);
    double margin = bound - e.amplitude;
    if (first || margin < report.worst_amplitude_margin) {
      report.worst_amplitude_margin = margin;
      report.worst_pattern = pattern_string(e.paulis);
      first = false;
    }
    if (e.amplitude > bound + tol) {
      report.amplitude_pass = false;
      ++report.amplitude_violations;
    }
    if (!(e.weight < kn * e.m)) {
      report.structural_pass = false;
      ++report.structural_violations;
    }
  }
  return report;
}

inline Thm3Report check_thm3(const PauliExpansion& expansion,
                             const DeltaProfile& profile, int n, int k,
                             double tol = kStateTol) {
  return check_amplitude_bounds(expansion, profile, n, k, tol);
}

/// Pure graph property: every nonempty support on the circuit's qubit edges
/// satisfies w < k^n m. Sweeps all 2^N supports.
inline bool check_structural(const MixedCircuit& c, int n, int k,
                             size_t max_edges = 16) {
  EdgeOrder order(c);
  size_t ne = order.edges().size();
  if (ne > max_edges) throw Error("check_structural: too many qubit edges");
  double kn = std::pow(static_cast<double>(std::max(2, k)), n);
  for (size_t mask = 1; mask < (size_t(1) << ne); ++mask) {
    std::vector<size_t> support;
    for (size_t i = 0; i < ne; ++i)
      if ((mask >> i) & 1) support.push_back(i);
    size_t m = order.locally_first_slots(support).size();
    if (!(static_cast<double>(support.size()) < kn * static_cast<double>(m)))
      return false;
  }
  return true;
}

struct QuasiIndependenceReport {
  double eps = 0;
  double constant = 1;
  double worst_ratio = 0;
  std::string worst_pattern;
  bool pass = true;
};

/// Checks amplitude <= C * eps^w(J) for all nonzero-weight branches. For
/// eps = 0 the check degenerates to requiring all such amplitudes to vanish.
inline QuasiIndependenceReport check_quasi_independence(
    const PauliExpansion& expansion, double eps, double constant = 1.0) {
  if (eps < 0 || eps >= 1)
    throw Error("check_quasi_independence: eps must be in [0,1)");
  QuasiIndependenceReport report;
  report.eps = eps;
  report.constant = constant;
  for (const PatternEntry& e : expansion.entries) {
    if (e.weight == 0) continue;
    if (eps == 0) {
      if (e.amplitude > 1e-12) {
        report.pass = false;
        report.worst_ratio = std::numeric_limits<double>::infinity();
        report.worst_pattern = pattern_string(e.paulis);
      }
      continue;
    }
    double ratio = e.amplitude / std::pow(eps, e.weight);
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_pattern = pattern_string(e.paulis);
    }
  }
  if (eps > 0 && report.worst_ratio > constant) report.pass = false;
  return report;
}

// ---------------------------------------------------------------------------
// Gadget Pauli push-through
// ---------------------------------------------------------------------------

struct PushthroughResult {
  int pauli = 0;        // 0..3, or -1 when the map is (numerically) zero
  double scale = 1.0;   // nonnegative
  double residual = 0;  // superoperator max-norm distance to scale * Pauli
};

namespace noise_detail {

inline Matrix pauli_conjugation_superop(int j) {
  Matrix s(4, 4);
  const Matrix& p = gates::pauli(j);
  for (Index cj = 0; cj < 2; ++cj)
    for (Index ci = 0; ci < 2; ++ci) {
      Matrix basis = Matrix::Zero(2, 2);
      basis(ci, cj) = 1;
      Matrix out = p * basis * p.adjoint();
      for (Index c = 0; c < 2; ++c)
        for (Index r = 0; r < 2; ++r)
          s(c * 2 + r, cj * 2 + ci) = out(r, c);
    }
  return s;
}

}  // namespace noise_detail

/// Classifies a 4x4 single-qubit superoperator as scale x (conjugation by a
/// Pauli). Throws if none fits within tol (which would falsify the gadget
/// reduction property).
inline PushthroughResult classify_pauli_superop(const Matrix& s,
                                                double tol = 1e-9) {
  if (s.rows() != 4 || s.cols() != 4)
    throw Error("classify_pauli_superop: expected a 1-qubit superoperator");
  PushthroughResult best;
  if (s.cwiseAbs().maxCoeff() <= tol) {
    best.pauli = -1;
    best.scale = 0;
    best.residual = s.cwiseAbs().maxCoeff();
    return best;
  }
  double best_residual = -1;
  for (int j = 0; j < 4; ++j) {
    Matrix cand = noise_detail::pauli_conjugation_superop(j);
    Complex inner = (cand.adjoint() * s).trace();
    double denom = cand.squaredNorm();
    double scale = inner.real() / denom;
    if (scale < 0) scale = 0;
    double residual = (s - scale * cand).cwiseAbs().maxCoeff();
    if (best_residual < 0 || residual < best_residual) {
      best_residual = residual;
      best.pauli = j;
      best.scale = scale;
      best.residual = residual;
    }
  }
  if (best.residual > tol)
    throw Error(
        "superoperator is not proportional to a Pauli conjugation "
        "(residual " +
        std::to_string(best.residual) + ")");
  return best;
}

/// Simulates the teleportation gadget with fixed Paulis inserted on the
/// given 8 edges (input edge first, then the internal edges in construction
/// order) and identifies the logical map.
inline PushthroughResult gadget_pauli_pushthrough(
    const std::array<int, 8>& pattern, double tol = 1e-9) {
  GadgetTemplate g = teleport_gadget();
  MixedCircuit c = g.circuit;
  for (size_t i = 0; i < pattern.size(); ++i) {
    int p = pattern[i];
    if (p < 0 || p > 3) throw Error("pattern entries must be 0..3");
    if (p == 0) continue;
    static const char* kNames[4] = {"I", "X", "Y", "Z"};
    c = insert_gate_on_edge(c, g.pauli_edges[i], gates::pauli(p), kNames[p]);
  }
  ProcessMatrix pm = tomography(c);
  return classify_pauli_superop(pm.superop, tol);
}

inline PushthroughResult gadget_pauli_pushthrough(uint16_t code,
                                                  double tol = 1e-9) {
  std::array<int, 8> pattern;
  for (size_t i = 0; i < 8; ++i)
    pattern[i] = static_cast<int>((code >> (2 * i)) & 3);
  return gadget_pauli_pushthrough(pattern, tol);
}

}  // namespace qgerm

#endif  // QGERM_NOISE_HPP
