// Copyright 2026 The nnmagic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Pauli strings are indexed lexicographically over (0, x, y, z) per qubit,
// qubit 0 as the most significant base-4 digit: index = sum mu_q 4^(n-1-q).

#include <array>
#include <bit>
#include <cstdint>

#include "nnmagic/qcore.hpp"

namespace nnmagic {

inline Eigen::Matrix2cd pauli_matrix(int mu) {
  switch (mu) {
    case 0: return gates::I();
    case 1: return gates::X();
    case 2: return gates::Y();
    case 3: return gates::Z();
    default: throw ArgumentError("Pauli label must be 0..3");
  }
}

inline CMatrix pauli_string_matrix(std::size_t index, std::size_t n_qubits) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    const int mu = static_cast<int>((index >> (2 * (n_qubits - 1 - q))) & 3u);
    out = kron(out, pauli_matrix(mu));
  }
  return out;
}

inline std::string pauli_label(std::size_t index, std::size_t n_qubits) {
  static constexpr char names[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (std::size_t q = 0; q < n_qubits; ++q) s += names[(index >> (2 * (n_qubits - 1 - q))) & 3u];
  return s;
}

/// Tr(rho P) for every Pauli string P, in lexicographic order.
inline Eigen::VectorXd pauli_expectations(const DensityMatrix& rho) {
  const std::size_t n = rho.n_qubits();
  const std::size_t count = std::size_t{1} << (2 * n);
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  for (std::size_t p = 0; p < count; ++p)
    out(static_cast<Eigen::Index>(p)) = (rho.matrix() * pauli_string_matrix(p, n)).trace().real();
  return out;
}

/// Inverse of pauli_expectations: rho = 2^-n sum_P <P> P.
inline CMatrix operator_from_pauli(const Eigen::VectorXd& expectations) {
  const std::size_t count = static_cast<std::size_t>(expectations.size());
  const std::size_t n = log2_exact(count) / 2;
  const auto d = Eigen::Index{1} << n;
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t p = 0; p < count; ++p) out += expectations(static_cast<Eigen::Index>(p)) * pauli_string_matrix(p, n);
  return out / static_cast<double>(d);
}

/// Sums of |<psi|P|psi>|^2 and |<psi|P|psi>|^4 over all 4^n Pauli strings.
///
/// For each X-support mask x the overlaps conj(psi[k^x]) psi[k] are
/// Walsh-Hadamard transformed over the Z-support mask, giving every
/// expectation up to a phase in O(4^n n).
struct PauliMoments {
  double second = 0.0;
  double fourth = 0.0;
};

inline PauliMoments pauli_moments(const StateVector& psi) {
  const std::size_t dim = psi.dim();
  const CVector& a = psi.amplitudes();
  std::vector<cplx> w(dim);
  PauliMoments m;
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t k = 0; k < dim; ++k)
      w[k] = std::conj(a(static_cast<Eigen::Index>(k ^ x))) * a(static_cast<Eigen::Index>(k));
    for (std::size_t len = 1; len < dim; len <<= 1)
      for (std::size_t i = 0; i < dim; i += len << 1)
        for (std::size_t j = i; j < i + len; ++j) {
          const cplx u = w[j], v = w[j + len];
          w[j] = u + v;
          w[j + len] = u - v;
        }
    for (const auto& e : w) {
      const double s = std::norm(e);
      m.second += s;
      m.fourth += s * s;
    }
  }
  return m;
}

}  // namespace nnmagic
