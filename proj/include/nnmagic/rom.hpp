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

// Robustness of magic over pure stabilizer states, and its local-unitary
// minimization.

#include <map>

#include "nnmagic/lp_simplex.hpp"
#include "nnmagic/optim.hpp"

namespace nnmagic {

/// Pure stabilizer states as Pauli expectation vectors (lexicographic order).
struct StabilizerStateSet {
  std::size_t n_qubits = 0;
  std::vector<Eigen::VectorXd> states;

  std::size_t size() const noexcept { return states.size(); }

  /// Column s holds state s.
  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd m(states.empty() ? 0 : states.front().size(), static_cast<Eigen::Index>(states.size()));
    for (std::size_t s = 0; s < states.size(); ++s) m.col(static_cast<Eigen::Index>(s)) = states[s];
    return m;
  }
};

/// Every pure stabilizer state on one or two qubits: each set of n
/// independent commuting Pauli generators with every sign choice gives the
/// projector prod (I + s_i P_i) / 2; duplicates are merged.
inline StabilizerStateSet enumerate_stabilizer_states(std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > 2) throw UnsupportedSizeError("stabilizer enumeration supports one or two qubits");
  const std::size_t n_pauli = std::size_t{1} << (2 * n_qubits);
  const auto dim = Eigen::Index{1} << n_qubits;
  std::vector<CMatrix> paulis(n_pauli);
  for (std::size_t p = 0; p < n_pauli; ++p) paulis[p] = pauli_string_matrix(p, n_qubits);
  const CMatrix id = CMatrix::Identity(dim, dim);

  std::vector<std::vector<std::size_t>> generator_sets;
  if (n_qubits == 1) {
    for (std::size_t p = 1; p < n_pauli; ++p) generator_sets.push_back({p});
  } else {
    for (std::size_t p = 1; p < n_pauli; ++p)
      for (std::size_t q = p + 1; q < n_pauli; ++q)
        if ((paulis[p] * paulis[q] - paulis[q] * paulis[p]).cwiseAbs().maxCoeff() < 1e-12) generator_sets.push_back({p, q});
  }

  std::map<std::vector<int>, Eigen::VectorXd> unique;
  for (const auto& gens : generator_sets) {
    for (std::size_t signs = 0; signs < (std::size_t{1} << gens.size()); ++signs) {
      CMatrix proj = id;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        const double s = (signs >> g) & 1u ? -1.0 : 1.0;
        proj = proj * (id + s * paulis[gens[g]]) / 2.0;
      }
      const Eigen::VectorXd v = pauli_expectations(DensityMatrix(proj));
      std::vector<int> key(static_cast<std::size_t>(v.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i) key[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(v(i)));
      unique.emplace(std::move(key), v.array().round().matrix());
    }
  }
  StabilizerStateSet set{n_qubits, {}};
  for (auto& [key, v] : unique) set.states.push_back(std::move(v));
  return set;
}

struct L1Decomposition {
  /// Affine weights x_i with target = sum_i x_i state_i.
  Eigen::VectorXd coefficients;
  double l1_norm = 0.0;
  /// Robustness of magic, l1_norm - 1.
  double rom = 0.0;
  double residual = 0.0;
};

/// min sum |x_i| s.t. sum_i x_i v_i = target, solved exactly with x = x+ - x-.
inline L1Decomposition solve_l1_lp(const Eigen::VectorXd& target, const StabilizerStateSet& basis, const SimplexOptions& opt = {}) {
  const Eigen::MatrixXd s = basis.matrix();
  if (s.rows() != target.size()) throw ArgumentError("target length does not match the stabilizer basis");
  const Eigen::Index m = s.cols();
  LinearProgram lp;
  lp.A.resize(s.rows(), 2 * m);
  lp.A << s, -s;
  lp.b = target;
  lp.c = Eigen::VectorXd::Ones(2 * m);
  const LPSolution sol = solve_lp(lp, opt);

  L1Decomposition out;
  out.coefficients = sol.x.head(m) - sol.x.tail(m);
  out.l1_norm = out.coefficients.cwiseAbs().sum();
  out.rom = out.l1_norm - 1.0;
  out.residual = (s * out.coefficients - target).cwiseAbs().maxCoeff();
  if (out.residual > 1e-8) throw SolverError("stabilizer decomposition does not reconstruct the target");
  return out;
}

inline L1Decomposition robustness_of_magic(const DensityMatrix& rho) {
  static const StabilizerStateSet one = enumerate_stabilizer_states(1);
  static const StabilizerStateSet two = enumerate_stabilizer_states(2);
  return solve_l1_lp(pauli_expectations(rho), rho.n_qubits() == 1 ? one : two);
}

/// Default budget for the non-smooth RoM landscape.
inline OptimizerConfig rom_optimizer_config() {
  OptimizerConfig c;
  c.n_starts = 200;
  return c;
}

/// Minimum RoM of (U_A (x) U_B) rho (U_A (x) U_B)^dagger over local unitaries.
inline NNResult nn_rom(const DensityMatrix& rho, const OptimizerConfig& cfg = rom_optimizer_config()) {
  if (rho.n_qubits() != 2) throw ArgumentError("nn_rom needs a two-qubit state");
  const StabilizerStateSet basis = enumerate_stabilizer_states(2);
  const RMatrix r = r_matrix(rho);
  auto objective = [&](std::span<const double> p) {
    const RMatrix moved = r.rotated(bloch_rotation({p[0], p[1], p[2]}), bloch_rotation({p[3], p[4], p[5]}));
    return solve_l1_lp(moved.pauli_vector(), basis).rom;
  };
  const auto box = euler_box(2);
  MultiStartResult ms = multi_start_minimize(objective, box, cfg);

  NNResult out;
  out.input_sre2 = sre2_mixed(rho);
  out.params = LocalUnitaryParams::from_flat(ms.argmin);
  const double unrotated = solve_l1_lp(r.pauli_vector(), basis).rom;
  const double rotated = solve_l1_lp(pauli_expectations(conjugate(rho, out.params.unitary())), basis).rom;
  if (unrotated < rotated) out.params = LocalUnitaryParams::identity(2);
  out.value = std::max(0.0, std::min(rotated, unrotated));
  out.best_start = ms.best_start;
  out.start_values = std::move(ms.start_values);
  return out;
}

}  // namespace nnmagic
