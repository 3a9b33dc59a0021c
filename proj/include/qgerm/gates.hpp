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

#ifndef QGERM_GATES_HPP
#define QGERM_GATES_HPP

#include <optional>
#include <string>

#include "qgerm/linalg.hpp"

namespace qgerm {
namespace gates {

inline const Matrix& pauli(int j) {
  static const Matrix paulis[4] = {
      (Matrix(2, 2) << 1, 0, 0, 1).finished(),
      (Matrix(2, 2) << 0, 1, 1, 0).finished(),
      (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
      (Matrix(2, 2) << 1, 0, 0, -1).finished()};
  if (j < 0 || j > 3) throw Error("pauli index out of range");
  return paulis[j];
}

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline Matrix hadamard() {
  Matrix h(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

inline Matrix phase_s() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = Complex(0, 1);
  return m;
}

inline Matrix phase_t() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = std::polar(1.0, M_PI / 4);
  return m;
}

// |x,y> -> |x+y,y>: the first factor is the target, the second the control.
inline Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m(((x ^ y) << 1) | y, (x << 1) | y) = 1;
  return m;
}

inline Matrix cz() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

inline Matrix toffoli() {
  Matrix m = Matrix::Identity(8, 8);
  // Controls on the first two factors, target on the third.
  m(6, 6) = 0;
  m(7, 7) = 0;
  m(6, 7) = 1;
  m(7, 6) = 1;
  return m;
}

// The teleportation unitary: a CNOT |x,y> -> |x+y,y> followed by a Hadamard
// on the second qubit.
inline Matrix u_tele() {
  Matrix h2 = Matrix::Zero(4, 4);
  Matrix h = hadamard();
  h2.block(0, 0, 2, 2) = h;
  h2.block(2, 2, 2, 2) = h;
  return h2 * cnot();
}

inline Matrix u_tele_inv() { return u_tele().adjoint().eval(); }

inline std::optional<Matrix> builtin(const std::string& name) {
  if (name == "I") return identity(2);
  if (name == "X") return pauli(1);
  if (name == "Y") return pauli(2);
  if (name == "Z") return pauli(3);
  if (name == "H") return hadamard();
  if (name == "S") return phase_s();
  if (name == "T") return phase_t();
  if (name == "CNOT") return cnot();
  if (name == "CZ") return cz();
  if (name == "TOFFOLI") return toffoli();
  if (name == "U_TELE") return u_tele();
  if (name == "U_TELE_INV") return u_tele_inv();
  return std::nullopt;
}

}  // namespace gates
}  // namespace qgerm

#endif  // QGERM_GATES_HPP
