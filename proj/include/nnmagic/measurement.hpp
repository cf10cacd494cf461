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

// Projective measurement of all but two qubits and the NN left behind.

#include <random>
#include <string>
#include <vector>

#include "nnmagic/errors.hpp"
#include "nnmagic/magic.hpp"
#include "nnmagic/rng.hpp"

namespace nnmagic {

inline constexpr std::size_t kMaxEnumerateLength = 14;

enum class MeasurementAxis { x, y, z };

inline char axis_name(MeasurementAxis a) { return a == MeasurementAxis::x ? 'x' : a == MeasurementAxis::y ? 'y' : 'z'; }

inline MeasurementAxis parse_axis(char c) {
  switch (c) {
    case 'x': return MeasurementAxis::x;
    case 'y': return MeasurementAxis::y;
    case 'z': return MeasurementAxis::z;
    default: throw ArgumentError(std::string("unknown measurement axis '") + c + "'");
  }
}

/// Enumerate every outcome, or draw n_samples outcomes by the Born rule.
struct MinnMode {
  std::size_t n_samples = 0;

  static MinnMode enumerate() { return {}; }
  static MinnMode sample(std::size_t n) {
    if (n < 2) throw ArgumentError("sample mode needs at least two samples");
    return {n};
  }
  bool is_enumerate() const noexcept { return n_samples == 0; }
};

struct MinnResult {
  double value = 0.0;
  double stderr_ = 0.0;
  double total_probability = 0.0;
  std::size_t n_outcomes = 0;
  std::size_t n_samples = 0;
};

/// Rotates every qubit so that a computational-basis measurement measures
/// the requested axis.
inline CVector rotate_to_axis(const CVector& amps, std::size_t n, MeasurementAxis axis) {
  CVector out = amps;
  if (axis == MeasurementAxis::z) return out;
  const Eigen::Matrix2cd u = axis == MeasurementAxis::x ? gates::H() : Eigen::Matrix2cd(gates::H() * gates::Sdg());
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t t[] = {q};
    detail::apply_gate_inplace(out, n, u, std::span<const std::size_t>(t));
  }
  return out;
}

struct Branch {
  double probability = 0.0;
  /// Unnormalized amplitudes of qubits (i, j), i as the high bit.
  Eigen::Vector4cd amplitudes = Eigen::Vector4cd::Zero();
};

/// Post-measurement branches of qubits (i, j) after measuring every other
/// qubit in the computational basis. Outcome o sets measured qubit k (k-th
/// in increasing order) to bit k of o.
inline std::vector<Branch> measurement_branches(const CVector& amps, std::size_t n, std::size_t i, std::size_t j) {
  const std::size_t idx[] = {i, j};
  detail::check_indices(idx, n);
  std::vector<Branch> out(std::size_t{1} << (n - 2));
  std::vector<std::size_t> measured;
  for (std::size_t q = 0; q < n; ++q)
    if (q != i && q != j) measured.push_back(q);
  const std::size_t dim = std::size_t{1} << n;
  for (std::size_t s = 0; s < dim; ++s) {
    std::size_t o = 0;
    for (std::size_t k = 0; k < measured.size(); ++k) o |= ((s >> bit_position(measured[k], n)) & 1u) << k;
    const std::size_t local = (((s >> bit_position(i, n)) & 1u) << 1) | ((s >> bit_position(j, n)) & 1u);
    out[o].amplitudes(static_cast<Eigen::Index>(local)) = amps(static_cast<Eigen::Index>(s));
  }
  for (auto& b : out) b.probability = b.amplitudes.squaredNorm();
  return out;
}

/// Two-qubit NN of a branch; zero for branches that cannot occur.
inline double branch_nn(const Branch& b) {
  return b.probability > 1e-300 ? nn_two_qubit_pure_analytic(StateVector(CVector(b.amplitudes))) : 0.0;
}

/// Measurement-induced NN of qubits (i, j): the Born average of the
/// two-qubit NN left after measuring all other qubits along axis.
inline MinnResult minn(const StateVector& psi, std::size_t i, std::size_t j, MeasurementAxis axis, MinnMode mode, Rng& rng) {
  const std::size_t n = psi.n_qubits();
  if (n < 3) throw ArgumentError("MINN needs at least one measured qubit");
  if (mode.is_enumerate() && n > kMaxEnumerateLength)
    throw ResourceError("outcome enumeration is capped at 14 qubits; use sample mode");
  const auto branches = measurement_branches(rotate_to_axis(psi.amplitudes(), n, axis), n, i, j);
  MinnResult out;
  out.n_outcomes = branches.size();
  std::vector<double> probs(branches.size()), nn(branches.size());
  for (std::size_t o = 0; o < branches.size(); ++o) {
    probs[o] = branches[o].probability;
    out.total_probability += probs[o];
  }
  if (mode.is_enumerate()) {
    for (std::size_t o = 0; o < branches.size(); ++o) out.value += probs[o] * branch_nn(branches[o]);
    return out;
  }
  std::discrete_distribution<std::size_t> draw(probs.begin(), probs.end());
  for (std::size_t o = 0; o < branches.size(); ++o) nn[o] = branch_nn(branches[o]);
  double sum = 0, sum2 = 0;
  for (std::size_t s = 0; s < mode.n_samples; ++s) {
    const double v = nn[draw(rng)];
    sum += v;
    sum2 += v * v;
  }
  const auto m = static_cast<double>(mode.n_samples);
  out.value = sum / m;
  out.stderr_ = std::sqrt(std::max(0.0, (sum2 / m - out.value * out.value) / (m - 1)));
  out.n_samples = mode.n_samples;
  return out;
}

}  // namespace nnmagic
