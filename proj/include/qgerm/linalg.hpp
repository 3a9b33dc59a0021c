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

#ifndef QGERM_LINALG_HPP
#define QGERM_LINALG_HPP

#include <algorithm>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgerm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Thrown on contract violations (dimension mismatches, budget overruns, bad
/// arguments). Validation problems in circuits are reported as data instead.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Structural checks (unitarity, hermiticity) use 1e-10; end-to-end state
// comparisons use 1e-9.
inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kStateTol = 1e-9;

/// Ordered list of tensor-factor dimensions. Factor 0 is the most significant
/// index digit, matching the Kronecker product convention.
struct SpaceShape {
  std::vector<Index> dims;

  SpaceShape() = default;
  SpaceShape(std::initializer_list<Index> d) : dims(d) { check(); }
  explicit SpaceShape(std::vector<Index> d) : dims(std::move(d)) { check(); }

  Index total() const {
    Index t = 1;
    for (Index d : dims) t *= d;
    return t;
  }
  size_t num_factors() const { return dims.size(); }

  void check() const {
    for (Index d : dims)
      if (d < 1) throw Error("SpaceShape: factor dimension must be >= 1");
  }

  SpaceShape concat(const SpaceShape& other) const {
    SpaceShape out = *this;
    out.dims.insert(out.dims.end(), other.dims.begin(), other.dims.end());
    return out;
  }

  bool operator==(const SpaceShape& o) const { return dims == o.dims; }
};

struct StateVec {
  SpaceShape shape;
  Vector amps;

  StateVec() = default;
  StateVec(SpaceShape s, Vector a) : shape(std::move(s)), amps(std::move(a)) {
    if (shape.total() != amps.size())
      throw Error("StateVec: amplitude count does not match shape");
  }

  double norm() const { return amps.norm(); }
  bool is_normalized(double tol = kStateTol) const {
    return std::abs(norm() - 1.0) <= tol;
  }
  // Error branches shrink vectors, so slightly-subnormalized states are legal.
  bool is_subnormalized(double tol = kStateTol) const {
    return norm() <= 1.0 + tol;
  }
};

struct DenseOperator {
  SpaceShape shape;
  Matrix entries;

  DenseOperator() = default;
  DenseOperator(SpaceShape s, Matrix m)
      : shape(std::move(s)), entries(std::move(m)) {
    if (entries.rows() != entries.cols())
      throw Error("DenseOperator: matrix must be square");
    if (shape.total() != entries.rows())
      throw Error("DenseOperator: matrix size does not match shape");
  }

  bool is_unitary(double tol = kStructuralTol) const {
    Matrix d = entries.adjoint() * entries -
               Matrix::Identity(entries.rows(), entries.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
  }
};

struct DensityOp {
  SpaceShape shape;
  Matrix entries;

  DensityOp() = default;
  DensityOp(SpaceShape s, Matrix m)
      : shape(std::move(s)), entries(std::move(m)) {
    if (entries.rows() != entries.cols())
      throw Error("DensityOp: matrix must be square");
    if (shape.total() != entries.rows())
      throw Error("DensityOp: matrix size does not match shape");
  }

  double trace_real() const { return entries.trace().real(); }

  bool is_hermitian(double tol = kStructuralTol) const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }
  bool is_positive_semidefinite(double floor = -kStructuralTol) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries,
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= floor;
  }
};

inline DensityOp density_from_state(const StateVec& psi) {
  return DensityOp(psi.shape, psi.amps * psi.amps.adjoint());
}

// ---------------------------------------------------------------------------
// Low-level kernels shared with the simulation engines. These act on raw
// Eigen containers plus an explicit factor-dimension list.
// ---------------------------------------------------------------------------
namespace kernels {

inline Index total_dim(const std::vector<Index>& dims) {
  Index t = 1;
  for (Index d : dims) t *= d;
  return t;
}

// Stride of factor i: product of dimensions of all later (less significant)
// factors.
inline std::vector<Index> strides(const std::vector<Index>& dims) {
  std::vector<Index> s(dims.size(), 1);
  for (size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

inline void check_targets(const std::vector<Index>& dims,
                          const std::vector<int>& targets) {
  std::vector<bool> seen(dims.size(), false);
  for (int t : targets) {
    if (t < 0 || static_cast<size_t>(t) >= dims.size())
      throw Error("target factor index out of range");
    if (seen[t]) throw Error("duplicate target factor index");
    seen[t] = true;
  }
}

// Offsets of the op-local index digits inside the full index, plus the list
// of base indices (full indices whose target digits are all zero).
struct TargetPlan {
  Index op_dim = 1;
  std::vector<Index> offsets;  // size op_dim
  std::vector<Index> bases;    // size total/op_dim
  // Fast path when the targets are consecutive ascending factors:
  bool contiguous = false;
  Index lo = 1;  // stride below the merged block
  Index hi = 1;  // number of blocks
};

inline TargetPlan plan_targets(const std::vector<Index>& dims,
                               const std::vector<int>& targets) {
  check_targets(dims, targets);
  TargetPlan plan;
  auto st = strides(dims);
  for (int t : targets) plan.op_dim *= dims[t];

  plan.contiguous = !targets.empty();
  for (size_t i = 0; i + 1 < targets.size(); ++i)
    if (targets[i + 1] != targets[i] + 1) plan.contiguous = false;
  if (plan.contiguous) {
    plan.lo = st[targets.back()];
    plan.hi = total_dim(dims) / (plan.op_dim * plan.lo);
    return plan;
  }

  plan.offsets.resize(plan.op_dim);
  for (Index a = 0; a < plan.op_dim; ++a) {
    Index rem = a, off = 0;
    for (size_t i = targets.size(); i-- > 0;) {
      Index d = dims[targets[i]];
      off += (rem % d) * st[targets[i]];
      rem /= d;
    }
    plan.offsets[a] = off;
  }
  Index total = total_dim(dims);
  plan.bases.reserve(total / plan.op_dim);
  for (Index idx = 0; idx < total; ++idx) {
    bool base = true;
    for (int t : targets)
      if ((idx / st[t]) % dims[t] != 0) {
        base = false;
        break;
      }
    if (base) plan.bases.push_back(idx);
  }
  return plan;
}

// y <- (I (x) op (x) I) x, where op acts on `targets` of the factored space.
// In-place on a raw buffer of length total_dim(dims) * batch, where the batch
// index is the most significant digit (used to run all density-matrix columns
// at once).
inline void apply_op(const Matrix& op, Complex* data, Index batch,
                     const std::vector<Index>& dims,
                     const std::vector<int>& targets) {
  TargetPlan plan = plan_targets(dims, targets);
  if (op.rows() != plan.op_dim || op.cols() != plan.op_dim)
    throw Error("apply_op: operator dimension does not match target factors");
  const Index total = total_dim(dims);
  const Index q = plan.op_dim;

  if (plan.contiguous) {
    // Each block of q*lo entries holds q chunks of length lo; viewed as an
    // (lo x q) column-major matrix, the op acts from the right as op^T.
    const Index lo = plan.lo, hi = plan.hi;
    Matrix opT = op.transpose();
    Matrix tmp(lo, q);
    for (Index b = 0; b < batch; ++b) {
      Complex* base = data + b * total;
      for (Index h = 0; h < hi; ++h) {
        Eigen::Map<Matrix> blk(base + h * q * lo, lo, q);
        tmp.noalias() = blk * opT;
        blk = tmp;
      }
    }
    return;
  }

  Vector gather(q), y(q);
  for (Index b = 0; b < batch; ++b) {
    Complex* base = data + b * total;
    for (Index bi : plan.bases) {
      for (Index a = 0; a < q; ++a) gather[a] = base[bi + plan.offsets[a]];
      y.noalias() = op * gather;
      for (Index a = 0; a < q; ++a) base[bi + plan.offsets[a]] = y[a];
    }
  }
}

inline void apply_op_vec(const Matrix& op, Vector& v,
                         const std::vector<Index>& dims,
                         const std::vector<int>& targets) {
  apply_op(op, v.data(), 1, dims, targets);
}

// rho <- (op on targets) rho (op on targets)^dagger.
inline void conjugate_op(const Matrix& op, Matrix& rho,
                         const std::vector<Index>& dims,
                         const std::vector<int>& targets) {
  const Index total = total_dim(dims);
  if (rho.rows() != total || rho.cols() != total)
    throw Error("conjugate_op: density dimension mismatch");
  // Left action: every column is an independent state vector.
  apply_op(op, rho.data(), total, dims, targets);
  // Right action by op^dagger: conjugate-transpose, act, transpose back.
  rho.adjointInPlace();
  apply_op(op, rho.data(), total, dims, targets);
  rho.adjointInPlace();
}

// Trace out a single factor of a density matrix, returning the smaller one.
inline Matrix trace_factor(const Matrix& rho, const std::vector<Index>& dims,
                           int factor) {
  auto st = strides(dims);
  const Index d = dims[factor];
  const Index stride = st[factor];
  const Index total = total_dim(dims);
  const Index out_dim = total / d;

  // Map a reduced index to a full index with the factor digit set to zero.
  std::vector<Index> embed(out_dim);
  {
    Index j = 0;
    for (Index idx = 0; idx < total; ++idx)
      if ((idx / stride) % d == 0) embed[j++] = idx;
  }
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (Index a = 0; a < d; ++a)
    for (Index c = 0; c < out_dim; ++c)
      for (Index r = 0; r < out_dim; ++r)
        out(r, c) += rho(embed[r] + a * stride, embed[c] + a * stride);
  return out;
}

// Zero all matrix elements that are off-diagonal in the given factor
// (computational-basis dephasing, i.e. a measurement whose outcome is kept
// classically).
inline void dephase_factor(Matrix& rho, const std::vector<Index>& dims,
                           int factor) {
  auto st = strides(dims);
  const Index d = dims[factor];
  const Index stride = st[factor];
  const Index total = total_dim(dims);
  for (Index c = 0; c < total; ++c) {
    Index cd = (c / stride) % d;
    for (Index r = 0; r < total; ++r)
      if ((r / stride) % d != cd) rho(r, c) = Complex(0, 0);
  }
}

}  // namespace kernels

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

inline DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
  Matrix out(a.entries.rows() * b.entries.rows(),
             a.entries.cols() * b.entries.cols());
  for (Index i = 0; i < a.entries.rows(); ++i)
    for (Index j = 0; j < a.entries.cols(); ++j)
      out.block(i * b.entries.rows(), j * b.entries.cols(), b.entries.rows(),
                b.entries.cols()) = a.entries(i, j) * b.entries;
  return DenseOperator(a.shape.concat(b.shape), std::move(out));
}

inline StateVec tensor(const StateVec& a, const StateVec& b) {
  Vector out(a.amps.size() * b.amps.size());
  for (Index i = 0; i < a.amps.size(); ++i)
    out.segment(i * b.amps.size(), b.amps.size()) = a.amps[i] * b.amps;
  return StateVec(a.shape.concat(b.shape), std::move(out));
}

inline void check_op_matches_targets(const DenseOperator& op,
                                     const SpaceShape& shape,
                                     const std::vector<int>& targets) {
  if (op.shape.num_factors() != targets.size())
    throw Error("apply_on_factors: operator factor count != target count");
  for (size_t i = 0; i < targets.size(); ++i) {
    int t = targets[i];
    if (t < 0 || static_cast<size_t>(t) >= shape.num_factors())
      throw Error("apply_on_factors: target index out of range");
    if (op.shape.dims[i] != shape.dims[t])
      throw Error("apply_on_factors: factor dimension mismatch");
  }
}

inline StateVec apply_on_factors(const DenseOperator& op, const StateVec& s,
                                 const std::vector<int>& targets) {
  check_op_matches_targets(op, s.shape, targets);
  StateVec out = s;
  kernels::apply_op_vec(op.entries, out.amps, s.shape.dims, targets);
  return out;
}

inline DensityOp apply_on_factors(const DenseOperator& op, const DensityOp& s,
                                  const std::vector<int>& targets) {
  check_op_matches_targets(op, s.shape, targets);
  DensityOp out = s;
  kernels::conjugate_op(op.entries, out.entries, s.shape.dims, targets);
  return out;
}

inline DensityOp partial_trace(const DensityOp& rho,
                               const std::vector<int>& keep) {
  kernels::check_targets(rho.shape.dims, keep);
  std::vector<bool> keep_mask(rho.shape.num_factors(), false);
  for (int k : keep) keep_mask[k] = true;

  Matrix m = rho.entries;
  std::vector<Index> dims = rho.shape.dims;
  // Trace factors back to front so earlier indices stay valid.
  for (size_t i = dims.size(); i-- > 0;) {
    if (keep_mask[i]) continue;
    m = kernels::trace_factor(m, dims, static_cast<int>(i));
    dims.erase(dims.begin() + i);
  }
  // Reorder kept factors into the order requested by `keep`.
  std::vector<int> kept_sorted;
  for (size_t i = 0; i < rho.shape.num_factors(); ++i)
    if (keep_mask[i]) kept_sorted.push_back(static_cast<int>(i));
  if (!std::equal(keep.begin(), keep.end(), kept_sorted.begin(),
                  kept_sorted.end())) {
    // Build a permutation matrix from sorted order to requested order.
    std::vector<Index> out_dims;
    for (int k : keep) out_dims.push_back(rho.shape.dims[k]);
    auto st_in = kernels::strides(dims);
    auto st_out = kernels::strides(out_dims);
    Index total = kernels::total_dim(dims);
    std::vector<Index> perm(total);
    for (Index idx = 0; idx < total; ++idx) {
      Index out = 0;
      for (size_t i = 0; i < keep.size(); ++i) {
        auto pos = std::find(kept_sorted.begin(), kept_sorted.end(), keep[i]) -
                   kept_sorted.begin();
        Index digit = (idx / st_in[pos]) % dims[pos];
        out += digit * st_out[i];
      }
      perm[idx] = out;
    }
    Matrix reordered(total, total);
    for (Index c = 0; c < total; ++c)
      for (Index r = 0; r < total; ++r) reordered(perm[r], perm[c]) = m(r, c);
    m = std::move(reordered);
    return DensityOp(SpaceShape(std::move(out_dims)), std::move(m));
  }
  std::vector<Index> out_dims = dims;
  return DensityOp(SpaceShape(std::move(out_dims)), std::move(m));
}

/// Largest singular value. This dominates sup |<psi|A|psi>| and agrees with
/// it on the unitarity and subunitarity checks used here.
inline double operator_norm(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double operator_norm(const DenseOperator& a) {
  return operator_norm(a.entries);
}

}  // namespace qgerm

#endif  // QGERM_LINALG_HPP
