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

// Non-local nonstabilizerness by direct minimization over local unitaries.

#include <limits>
#include <numbers>

#include "nnmagic/magic.hpp"
#include "nnmagic/nelder_mead.hpp"
#include "nnmagic/parallel.hpp"

namespace nnmagic {

/// Single-qubit unitary without global phase:
///   [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]
/// which equals Rz(phi) Ry(theta) Rz(lambda) up to phase.
struct EulerAngles {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
};

inline Eigen::Matrix2cd single_qubit_unitary(const EulerAngles& e) {
  const double c = std::cos(e.theta / 2), s = std::sin(e.theta / 2);
  Eigen::Matrix2cd u;
  u << c, -std::polar(s, e.lambda), std::polar(s, e.phi), std::polar(c, e.phi + e.lambda);
  return u;
}

/// SO(3) image O of the unitary: U sigma_j U^dagger = sum_i O_ij sigma_i.
inline Eigen::Matrix3d bloch_rotation(const EulerAngles& e) {
  const double cp = std::cos(e.phi), sp = std::sin(e.phi);
  const double ct = std::cos(e.theta), st = std::sin(e.theta);
  const double cl = std::cos(e.lambda), sl = std::sin(e.lambda);
  Eigen::Matrix3d rz_phi, ry, rz_lambda;
  rz_phi << cp, -sp, 0, sp, cp, 0, 0, 0, 1;
  ry << ct, 0, st, 0, 1, 0, -st, 0, ct;
  rz_lambda << cl, -sl, 0, sl, cl, 0, 0, 0, 1;
  return rz_phi * ry * rz_lambda;
}

/// Same unitary up to a global phase, with theta in [0, pi] and phi, lambda in [0, 2 pi).
inline EulerAngles canonicalize(EulerAngles e) {
  constexpr double two_pi = 2 * std::numbers::pi;
  auto wrap = [](double v) {
    v = std::fmod(v, two_pi);
    return v < 0 ? v + two_pi : v;
  };
  e.theta = wrap(e.theta);
  if (e.theta > std::numbers::pi) {
    e.theta = two_pi - e.theta;
    e.phi += std::numbers::pi;
    e.lambda += std::numbers::pi;
  }
  e.phi = wrap(e.phi);
  e.lambda = wrap(e.lambda);
  return e;
}

/// One Euler triple per qubit of a product unitary U_0 (x) U_1 (x) ...
class LocalUnitaryParams {
 public:
  LocalUnitaryParams() = default;
  explicit LocalUnitaryParams(std::vector<EulerAngles> angles) : angles_(std::move(angles)) {}

  static LocalUnitaryParams identity(std::size_t n_qubits) { return LocalUnitaryParams(std::vector<EulerAngles>(n_qubits)); }

  static LocalUnitaryParams from_flat(std::span<const double> p) {
    if (p.size() % 3 != 0) throw ArgumentError("parameter count must be a multiple of 3");
    std::vector<EulerAngles> a(p.size() / 3);
    for (std::size_t q = 0; q < a.size(); ++q) a[q] = canonicalize({p[3 * q], p[3 * q + 1], p[3 * q + 2]});
    return LocalUnitaryParams(std::move(a));
  }

  std::size_t n_qubits() const noexcept { return angles_.size(); }
  const EulerAngles& operator[](std::size_t q) const { return angles_.at(q); }
  const std::vector<EulerAngles>& angles() const noexcept { return angles_; }

  std::vector<double> flat() const {
    std::vector<double> p;
    for (const auto& e : angles_) p.insert(p.end(), {e.theta, e.phi, e.lambda});
    return p;
  }

  /// Full product unitary on all qubits (qubit 0 leftmost).
  CMatrix unitary() const {
    CMatrix u = CMatrix::Identity(1, 1);
    for (const auto& e : angles_) u = kron(u, single_qubit_unitary(e));
    return u;
  }

 private:
  std::vector<EulerAngles> angles_;
};

struct OptimizerConfig {
  std::size_t n_starts = 100;
  std::size_t max_iterations = 5000;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  double initial_step = 0.25;
  /// Fresh-simplex restarts from each converged point; stops early once a
  /// restart improves by less than `tolerance`.
  std::size_t max_restarts = 4;
};

struct MultiStartResult {
  std::vector<double> argmin;
  double value = std::numeric_limits<double>::infinity();
  std::size_t best_start = 0;
  /// Converged minimum of each start, in start order.
  std::vector<double> start_values;
};

/// Upper edges of the (theta, phi, lambda) box for `n_qubits` triples.
inline std::vector<double> euler_box(std::size_t n_qubits) {
  std::vector<double> box;
  for (std::size_t q = 0; q < n_qubits; ++q) box.insert(box.end(), {std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi});
  return box;
}

/// Multi-start Nelder-Mead. Start 0 is the origin; start s > 0 is uniform in
/// [0, box) drawn from its own stream derive_rng(seed, {s}), so the result
/// does not depend on how starts are scheduled over threads. Ties go to the
/// lowest start index.
template <class Objective>
MultiStartResult multi_start_minimize(const Objective& objective, std::span<const double> box, const OptimizerConfig& cfg) {
  if (cfg.n_starts == 0) throw ArgumentError("n_starts must be at least 1");
  const std::size_t k = box.size();
  std::vector<NelderMeadResult> runs(cfg.n_starts);
  const NelderMeadOptions nm{cfg.max_iterations, cfg.tolerance, 1e-10, cfg.initial_step};

  parallel_for(cfg.n_starts, [&](std::size_t s) {
    std::vector<double> x(k, 0.0);
    if (s > 0) {
      Rng rng = derive_rng(cfg.seed, {s});
      for (std::size_t i = 0; i < k; ++i) x[i] = std::uniform_real_distribution<double>(0.0, box[i])(rng);
    }
    NelderMeadResult r = nelder_mead(objective, x, nm);
    for (std::size_t restart = 0; restart < cfg.max_restarts; ++restart) {
      NelderMeadResult again = nelder_mead(objective, r.argmin, nm);
      const double gain = r.value - again.value;
      if (again.value < r.value) r = std::move(again);
      if (gain < cfg.tolerance) break;
    }
    runs[s] = std::move(r);
  });

  MultiStartResult out;
  out.start_values.reserve(runs.size());
  for (std::size_t s = 0; s < runs.size(); ++s) {
    out.start_values.push_back(runs[s].value);
    if (runs[s].value < out.value) {
      out.value = runs[s].value;
      out.argmin = runs[s].argmin;
      out.best_start = s;
    }
  }
  return out;
}

struct NNResult {
  /// Minimized SRE, nats.
  double value = 0.0;
  LocalUnitaryParams params;
  /// SRE of the untransformed input.
  double input_sre2 = 0.0;
  std::size_t best_start = 0;
  std::vector<double> start_values;
};

/// SRE of (U_A (x) U_B) rho (U_A (x) U_B)^dagger from the six Euler angles,
/// evaluated in the Pauli picture; sum R^2 is invariant so only sum R^4 moves.
class TwoQubitSreObjective {
 public:
  explicit TwoQubitSreObjective(const RMatrix& r) : r_(r), second_(r.second_moment()) {}

  double operator()(std::span<const double> p) const {
    const Eigen::Matrix3d oa = bloch_rotation({p[0], p[1], p[2]});
    const Eigen::Matrix3d ob = bloch_rotation({p[3], p[4], p[5]});
    const Eigen::Vector3d a = oa * r_.a();
    const Eigen::Vector3d b = ob * r_.b();
    const Eigen::Matrix3d t = oa * r_.T() * ob.transpose();
    const double fourth = 1.0 + a.array().square().square().sum() + b.array().square().square().sum() +
                          t.array().square().square().sum();
    return sre2_from_moments(second_, fourth);
  }

 private:
  RMatrix r_;
  double second_;
};

inline NNResult nn_optimize(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  if (rho.n_qubits() != 2) throw ArgumentError("nn_optimize needs a two-qubit state");
  const RMatrix r = r_matrix(rho);
  const TwoQubitSreObjective objective(r);
  const auto box = euler_box(2);
  MultiStartResult ms = multi_start_minimize(objective, box, cfg);

  NNResult out;
  out.input_sre2 = sre2_mixed(rho);
  out.params = LocalUnitaryParams::from_flat(ms.argmin);
  // Report Eq.-level SRE of the actually rotated state, not the Pauli-picture proxy.
  const double rotated = sre2_mixed(conjugate(rho, out.params.unitary()));
  out.value = std::max(0.0, std::min(rotated, out.input_sre2));
  out.best_start = ms.best_start;
  out.start_values = std::move(ms.start_values);
  return out;
}

inline NNResult nn_optimize(const StateVector& psi, const OptimizerConfig& cfg = {}) {
  return nn_optimize(DensityMatrix::from_pure(psi), cfg);
}

struct Bipartition {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

/// NN of a pure state on up to four qubits, restricted to products of
/// single-qubit unitaries. The product ansatz is a subset of U_A (x) U_B, so
/// the result is an upper bound on the NN across `parts`.
inline NNResult nn_optimize_nqubit(const StateVector& psi, const Bipartition& parts, const OptimizerConfig& cfg = {}) {
  const std::size_t n = psi.n_qubits();
  if (n > 4) throw UnsupportedSizeError("nn_optimize_nqubit supports at most four qubits");
  std::vector<std::size_t> all(parts.a);
  all.insert(all.end(), parts.b.begin(), parts.b.end());
  if (parts.a.empty() || parts.b.empty() || all.size() != n) throw ArgumentError("bipartition must split all qubits into two non-empty sides");
  detail::check_indices(all, n);

  auto objective = [&psi, n](std::span<const double> p) {
    CVector amps = psi.amplitudes();
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t target[1] = {q};
      detail::apply_gate_inplace(amps, n, single_qubit_unitary({p[3 * q], p[3 * q + 1], p[3 * q + 2]}), target);
    }
    return sre2_pure(StateVector(std::move(amps)));
  };
  const auto box = euler_box(n);
  MultiStartResult ms = multi_start_minimize(objective, box, cfg);

  NNResult out;
  out.input_sre2 = sre2_pure(psi);
  out.params = LocalUnitaryParams::from_flat(ms.argmin);
  out.value = std::max(0.0, std::min(ms.value, out.input_sre2));
  out.best_start = ms.best_start;
  out.start_values = std::move(ms.start_values);
  return out;
}

}  // namespace nnmagic
