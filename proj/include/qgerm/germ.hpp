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

#ifndef QGERM_GERM_HPP
#define QGERM_GERM_HPP

#include <map>
#include <string>

#include "qgerm/circuit.hpp"

namespace qgerm {

enum class GermFamily { Identity, CoherentRotation, DelayedRotation, SpreadingFlag };

inline std::string germ_family_name(GermFamily f) {
  switch (f) {
    case GermFamily::Identity: return "identity";
    case GermFamily::CoherentRotation: return "coherent_rotation";
    case GermFamily::DelayedRotation: return "delayed_rotation";
    case GermFamily::SpreadingFlag: return "spreading_flag";
  }
  throw Error("bad germ family");
}

/// Per-site noise description: one germ factor of dimension `dim` rides each
/// live qubit. Every qubit edge applies the unitary `edge_error` on
/// (germ (x) qubit); every gate applies a mixing unitary on its input germs.
/// Bit edges carry nothing.
struct GermModel {
  GermFamily family = GermFamily::Identity;
  int dim = 1;
  Vector g0;          // default initial germ state
  Matrix edge_error;  // default E on dim*2 (germ factor first)

  // Family parameters, kept for reports and round-tripping.
  double theta = 0.0;
  int axis = 1;       // Pauli index for CoherentRotation
  int threshold = 0;  // clock threshold for DelayedRotation

  // Adversarial per-site overrides.
  std::map<NodeId, Vector> g0_overrides;
  std::map<NodeId, Matrix> mixer_overrides;  // keyed by gate node id
  std::map<EdgeId, Matrix> edge_overrides;   // keyed by qubit edge id

  Vector g0_for(NodeId site) const {
    auto it = g0_overrides.find(site);
    return it == g0_overrides.end() ? g0 : it->second;
  }

  Matrix error_for(EdgeId edge) const {
    auto it = edge_overrides.find(edge);
    return it == edge_overrides.end() ? edge_error : it->second;
  }

  /// Default mixer on k input germs; identity except for SpreadingFlag,
  /// which flips every germ's partners controlled on it being active, pairs
  /// taken in ascending (control, target) port order.
  Matrix default_mixer(int k) const {
    Index n = 1;
    for (int i = 0; i < k; ++i) n *= dim;
    if (family != GermFamily::SpreadingFlag || k < 2)
      return Matrix::Identity(n, n);
    Matrix m = Matrix::Zero(n, n);
    for (Index x = 0; x < n; ++x) {
      // Factor i is bit (k-1-i); apply the controlled flips sequentially.
      Index y = x;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          if (i == j) continue;
          if ((y >> (k - 1 - i)) & 1) y ^= Index(1) << (k - 1 - j);
        }
      m(y, x) = 1;
    }
    return m;
  }

  Matrix mixer_for(NodeId site, int k) const {
    auto it = mixer_overrides.find(site);
    return it == mixer_overrides.end() ? default_mixer(k) : it->second;
  }

  void check() const {
    if (dim < 1) throw Error("germ dimension must be >= 1");
    if (g0.size() != dim) throw Error("g0 dimension mismatch");
    if (std::abs(g0.norm() - 1.0) > kStructuralTol)
      throw Error("g0 must be normalized");
    auto check_unitary = [](const Matrix& m, Index want, const char* what) {
      if (m.rows() != want || m.cols() != want)
        throw Error(std::string(what) + ": wrong dimension");
      if (!DenseOperator(SpaceShape({want}), m).is_unitary())
        throw Error(std::string(what) + ": not unitary");
    };
    check_unitary(edge_error, 2 * dim, "edge error");
    for (auto& [id, m] : edge_overrides)
      check_unitary(m, 2 * dim, "edge error override");
    for (auto& [id, m] : mixer_overrides) {
      Index n = m.rows();
      Index probe = 1;
      while (probe < n) probe *= dim;
      if (dim == 1) probe = 1;
      if (probe != n) throw Error("mixer override: dimension not a power of d");
      check_unitary(m, n, "mixer override");
    }
    for (auto& [id, v] : g0_overrides)
      if (v.size() != dim || std::abs(v.norm() - 1.0) > kStructuralTol)
        throw Error("g0 override: bad state");
  }
};

namespace germ_detail {

inline Vector basis_state(int dim, int k) {
  Vector v = Vector::Zero(dim);
  v[k] = 1;
  return v;
}

inline Matrix exp_i_theta_x(double theta) {
  return std::cos(theta) * gates::pauli(0) +
         Complex(0, 1) * std::sin(theta) * gates::pauli(1);
}

}  // namespace germ_detail

inline GermModel germ_identity(int dim = 1) {
  GermModel m;
  m.family = GermFamily::Identity;
  m.dim = dim;
  m.g0 = germ_detail::basis_state(dim, 0);
  m.edge_error = Matrix::Identity(2 * dim, 2 * dim);
  m.check();
  return m;
}

/// E = cos(theta) I + i sin(theta) (I_d (x) P_axis): the germ is inert but
/// the qubit coherently rotates on every edge.
inline GermModel germ_coherent_rotation(double theta, int axis = 1,
                                        int dim = 1) {
  if (axis < 1 || axis > 3) throw Error("axis must be 1 (X), 2 (Y) or 3 (Z)");
  GermModel m;
  m.family = GermFamily::CoherentRotation;
  m.dim = dim;
  m.theta = theta;
  m.axis = axis;
  m.g0 = germ_detail::basis_state(dim, 0);
  Matrix id = Matrix::Identity(dim, dim);
  m.edge_error =
      std::cos(theta) * Matrix::Identity(2 * dim, 2 * dim) +
      Complex(0, 1) * std::sin(theta) *
          tensor(DenseOperator(SpaceShape({dim}), id),
                 DenseOperator(SpaceShape({2}), gates::pauli(axis)))
              .entries;
  m.check();
  return m;
}

/// The germ is a clock of dimension `clock_dim` that ticks once per edge;
/// the qubit is untouched while the clock reads below `threshold` and gets
/// an X rotation by theta afterwards.
inline GermModel germ_delayed_rotation(int clock_dim, int threshold,
                                       double theta) {
  if (clock_dim < 1) throw Error("clock dimension must be >= 1");
  GermModel m;
  m.family = GermFamily::DelayedRotation;
  m.dim = clock_dim;
  m.theta = theta;
  m.threshold = threshold;
  m.g0 = germ_detail::basis_state(clock_dim, 0);
  Matrix e = Matrix::Zero(2 * clock_dim, 2 * clock_dim);
  Matrix rot = germ_detail::exp_i_theta_x(theta);
  for (int t = 0; t < clock_dim; ++t) {
    const Matrix& r = t < threshold ? gates::pauli(0) : rot;
    int t1 = (t + 1) % clock_dim;
    e.block(2 * t1, 2 * t, 2, 2) = r;
  }
  m.edge_error = std::move(e);
  m.check();
  return m;
}

/// Two-state germ (dormant/active): dormant germs do nothing, active germs
/// rotate their qubit on every edge and activate every germ they meet at a
/// gate (via the SpreadingFlag default mixer).
inline GermModel germ_spreading_flag(double theta) {
  GermModel m;
  m.family = GermFamily::SpreadingFlag;
  m.dim = 2;
  m.theta = theta;
  m.g0 = germ_detail::basis_state(2, 0);
  Matrix e = Matrix::Zero(4, 4);
  e.block(0, 0, 2, 2) = gates::pauli(0);
  e.block(2, 2, 2, 2) = germ_detail::exp_i_theta_x(theta);
  m.edge_error = std::move(e);
  m.check();
  return m;
}

}  // namespace qgerm

#endif  // QGERM_GERM_HPP
