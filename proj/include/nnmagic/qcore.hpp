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

// Dense linear algebra for few-qubit states.
//
// Ordering convention: qubit 0 is the leftmost tensor factor, i.e. the most
// significant bit of a basis index. For an n-qubit register, qubit q sits at
// bit position n-1-q, and kron(A, B) acts with A on qubit 0.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nnmagic/errors.hpp"
#include "nnmagic/rng.hpp"

namespace nnmagic {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kEigenClip = -1e-9;

inline std::size_t bit_position(std::size_t qubit, std::size_t n_qubits) { return n_qubits - 1 - qubit; }

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline std::size_t log2_exact(std::size_t v) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < v) ++n;
  return n;
}

/// Pure state on n qubits; always normalized.
class StateVector {
 public:
  explicit StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (!is_power_of_two(static_cast<std::size_t>(amps_.size())) || amps_.size() < 2)
      throw ArgumentError("state length must be 2^n with n >= 1");
    const double norm = amps_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ArgumentError("state has zero or non-finite norm");
    amps_ /= norm;
    n_ = log2_exact(static_cast<std::size_t>(amps_.size()));
  }

  static StateVector basis(std::size_t n_qubits, std::size_t index) {
    CVector v = CVector::Zero(Eigen::Index{1} << n_qubits);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
  }

  /// Computational basis state from a bit string, qubit 0 first ("0110").
  static StateVector from_bits(const std::string& bits) {
    std::size_t index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw ArgumentError("bit string must contain only 0 and 1");
      index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    return basis(bits.size(), index);
  }

  std::size_t n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const noexcept { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  CVector amps_;
  std::size_t n_ = 0;
};

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  CVector v(static_cast<Eigen::Index>(a.dim() * b.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i)
    v.segment(static_cast<Eigen::Index>(i * b.dim()), static_cast<Eigen::Index>(b.dim())) = a[i] * b.amplitudes();
  return StateVector(std::move(v));
}

/// Hermitian, unit-trace, positive semidefinite operator on one or two qubits.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
    const auto d = m_.rows();
    if (m_.cols() != d || (d != 2 && d != 4)) throw ArgumentError("density matrix must be 2x2 or 4x4");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kNormTolerance) throw ArgumentError("density matrix is not Hermitian");
    if (std::abs(m_.trace() - 1.0) > kNormTolerance) throw ArgumentError("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigenClip) throw ArgumentError("density matrix has a negative eigenvalue");
    m_ = 0.5 * (m_ + m_.adjoint()).eval();
    n_ = d == 2 ? 1 : 2;
  }

  static DensityMatrix from_pure(const StateVector& psi) {
    if (psi.n_qubits() > 2) throw ArgumentError("density matrices are limited to two qubits");
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  static DensityMatrix maximally_mixed(std::size_t n_qubits) {
    const auto d = Eigen::Index{1} << n_qubits;
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  std::size_t n_qubits() const noexcept { return n_; }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  CMatrix m_;
  std::size_t n_ = 0;
};

inline DensityMatrix mix(double weight, const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(weight * a.matrix() + (1.0 - weight) * b.matrix());
}

/// U rho U^dagger.
inline DensityMatrix conjugate(const DensityMatrix& rho, const CMatrix& u) {
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

/// Bipartite pure-state spectrum {cos^2 theta, sin^2 theta}, theta in [0, pi/4].
struct SchmidtSpectrum {
  double theta = 0.0;
  double x() const { return std::cos(theta) * std::cos(theta); }
  std::pair<double, double> weights() const { return {x(), 1.0 - x()}; }
};

namespace detail {

inline void check_indices(std::span<const std::size_t> idx, std::size_t n) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= n) throw ArgumentError("qubit index " + std::to_string(idx[i]) + " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (idx[i] == idx[j]) throw ArgumentError("duplicate qubit index " + std::to_string(idx[i]));
  }
}

/// Reshapes amplitudes into a (rest x kept) matrix; kept index follows `keep` order.
inline CMatrix split_amplitudes(const CVector& amps, std::size_t n, std::span<const std::size_t> keep) {
  const std::size_t m = keep.size();
  std::uint64_t keep_mask = 0;
  for (auto q : keep) keep_mask |= std::uint64_t{1} << bit_position(q, n);
  CMatrix out(Eigen::Index{1} << (n - m), Eigen::Index{1} << m);
  for (std::size_t k = 0; k < static_cast<std::size_t>(amps.size()); ++k) {
    std::size_t s = 0;
    for (auto q : keep) s = (s << 1) | ((k >> bit_position(q, n)) & 1u);
    std::size_t rest = 0, out_bit = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (keep_mask >> b & 1u) continue;
      rest |= ((k >> b) & 1u) << out_bit++;
    }
    out(static_cast<Eigen::Index>(rest), static_cast<Eigen::Index>(s)) = amps(static_cast<Eigen::Index>(k));
  }
  return out;
}

inline Eigen::VectorXd clipped_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0);
}

inline double shannon(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (double v : p)
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

}  // namespace detail

/// Reduced density matrix on one or two kept qubits, in the order given.
inline DensityMatrix partial_trace(const StateVector& psi, std::span<const std::size_t> keep) {
  if (keep.empty() || keep.size() > 2) throw ArgumentError("partial_trace keeps one or two qubits");
  detail::check_indices(keep, psi.n_qubits());
  const CMatrix split = detail::split_amplitudes(psi.amplitudes(), psi.n_qubits(), keep);
  return DensityMatrix(split.transpose() * split.conjugate());
}

inline DensityMatrix partial_trace(const StateVector& psi, std::initializer_list<std::size_t> keep) {
  return partial_trace(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Single-qubit marginal of a two-qubit density matrix.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep) {
  if (rho.n_qubits() != 2 || keep > 1) throw ArgumentError("partial_trace of a two-qubit density matrix keeps qubit 0 or 1");
  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int t = 0; t < 2; ++t)
        out(a, b) += keep == 0 ? m(2 * a + t, 2 * b + t) : m(2 * t + a, 2 * t + b);
  return DensityMatrix(out);
}

inline SchmidtSpectrum schmidt_spectrum(const StateVector& psi) {
  if (psi.n_qubits() != 2) throw ArgumentError("schmidt_spectrum needs a two-qubit state");
  Eigen::Matrix2cd m;
  m << psi[0], psi[1], psi[2], psi[3];
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
  const auto s = svd.singularValues();
  return SchmidtSpectrum{std::atan2(s(1), s(0))};
}

/// Entanglement entropy of the first `n_left` qubits of a pure state, in nats.
inline double bipartite_entropy(const StateVector& psi, std::size_t n_left) {
  if (n_left == 0 || n_left >= psi.n_qubits()) throw ArgumentError("bipartition must leave both sides non-empty");
  const auto rows = Eigen::Index{1} << n_left;
  const auto cols = Eigen::Index{1} << (psi.n_qubits() - n_left);
  // Row-major reshape: left qubits are the high bits.
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = psi.amplitudes()(i * cols + j);
  Eigen::BDCSVD<CMatrix> svd(m);
  Eigen::VectorXd p = svd.singularValues().array().square();
  return detail::shannon(p);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return detail::shannon(detail::clipped_eigenvalues(rho.matrix()));
}

inline double renyi2_entropy(const DensityMatrix& rho) {
  return -std::log((rho.matrix() * rho.matrix()).trace().real());
}

/// Partial transpose on the second qubit of a two-qubit operator.
inline CMatrix partial_transpose(const CMatrix& m) {
  CMatrix out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = m(2 * a + d, 2 * c + b);
  return out;
}

inline double log_negativity(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw ArgumentError("log_negativity needs a two-qubit state");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_transpose(rho.matrix()), Eigen::EigenvaluesOnly);
  return std::max(0.0, std::log(es.eigenvalues().cwiseAbs().sum()));
}

inline double mutual_information(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw ArgumentError("mutual_information needs a two-qubit state");
  return von_neumann_entropy(partial_trace(rho, 0)) + von_neumann_entropy(partial_trace(rho, 1)) -
         von_neumann_entropy(rho);
}

inline double mutual_information(const StateVector& psi, std::size_t i, std::size_t j) {
  const std::size_t keep[2] = {i, j};
  return mutual_information(partial_trace(psi, keep));
}

namespace gates {
inline Eigen::Matrix2cd I() { return Eigen::Matrix2cd::Identity(); }
inline Eigen::Matrix2cd X() { Eigen::Matrix2cd m; m << 0, 1, 1, 0; return m; }
inline Eigen::Matrix2cd Y() { Eigen::Matrix2cd m; m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
inline Eigen::Matrix2cd Z() { Eigen::Matrix2cd m; m << 1, 0, 0, -1; return m; }
inline Eigen::Matrix2cd H() { Eigen::Matrix2cd m; m << 1, 1, 1, -1; return m / std::sqrt(2.0); }
inline Eigen::Matrix2cd S() { Eigen::Matrix2cd m; m << 1, 0, 0, cplx(0, 1); return m; }
inline Eigen::Matrix2cd Sdg() { return S().adjoint(); }
inline Eigen::Matrix2cd T() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
  return m;
}
/// Control on the first target, NOT on the second.
inline Eigen::Matrix4cd CNOT() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}
inline Eigen::Matrix4cd CZ() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(3, 3) = -1;
  return m;
}
}  // namespace gates

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline bool is_unitary(const CMatrix& u, double tol = kNormTolerance) {
  if (u.rows() != u.cols()) return false;
  return ((u.adjoint() * u) - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

namespace detail {

/// In-place k-qubit gate; gate row/column index follows `targets` order.
template <class Gate>
void apply_gate_inplace(CVector& amps, std::size_t n, const Gate& gate, std::span<const std::size_t> targets) {
  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  std::vector<std::size_t> offsets(sub, 0);
  std::size_t mask = 0;
  for (std::size_t s = 0; s < sub; ++s)
    for (std::size_t t = 0; t < k; ++t)
      if ((s >> (k - 1 - t)) & 1u) offsets[s] |= std::size_t{1} << bit_position(targets[t], n);
  for (auto q : targets) mask |= std::size_t{1} << bit_position(q, n);
  std::vector<cplx> in(sub), out(sub);
  const std::size_t dim = static_cast<std::size_t>(amps.size());
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::size_t s = 0; s < sub; ++s) in[s] = amps(static_cast<Eigen::Index>(base | offsets[s]));
    for (std::size_t r = 0; r < sub; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < sub; ++c) acc += gate(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      out[r] = acc;
    }
    for (std::size_t s = 0; s < sub; ++s) amps(static_cast<Eigen::Index>(base | offsets[s])) = out[s];
  }
}

}  // namespace detail

inline StateVector apply_gate(const StateVector& psi, const CMatrix& gate, std::span<const std::size_t> targets) {
  detail::check_indices(targets, psi.n_qubits());
  if (targets.empty() || gate.rows() != (Eigen::Index{1} << targets.size()))
    throw ArgumentError("gate dimension does not match the number of targets");
  if (!is_unitary(gate)) throw ArgumentError("gate is not unitary");
  CVector amps = psi.amplitudes();
  detail::apply_gate_inplace(amps, psi.n_qubits(), gate, targets);
  return StateVector(std::move(amps));
}

inline StateVector apply_gate(const StateVector& psi, const CMatrix& gate, std::initializer_list<std::size_t> targets) {
  return apply_gate(psi, gate, std::span<const std::size_t>(targets.begin(), targets.size()));
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out.
inline CMatrix haar_random_unitary(std::size_t dim, Rng& rng) {
  if (!is_power_of_two(dim)) throw ArgumentError("unitary dimension must be a power of two");
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix z(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const cplx rd = r(j, j);
    const double mag = std::abs(rd);
    q.col(j) *= mag > 0.0 ? rd / mag : cplx(1.0);
  }
  return q;
}

inline CMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng = derive_rng(seed);
  return haar_random_unitary(dim, rng);
}

/// Haar-distributed pure state: a normalized complex Gaussian vector.
inline StateVector haar_random_state(std::size_t n_qubits, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  return StateVector(v);
}

inline StateVector haar_random_state(std::size_t n_qubits, std::uint64_t seed) {
  Rng rng = derive_rng(seed);
  return haar_random_state(n_qubits, rng);
}

}  // namespace nnmagic
