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

// Closed-form nonstabilizerness measures. All logarithms are natural.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <limits>

#include "nnmagic/pauli.hpp"

namespace nnmagic {

/// R_{mu nu} = Tr(rho sigma_mu (x) sigma_nu) for a two-qubit state.
///
/// Block layout: R(0,0) = 1, a = R(1..3, 0) is the Bloch vector of qubit A
/// (first tensor factor), b = R(0, 1..3) that of qubit B, and
/// T = R(1..3, 1..3) the correlation block. Local unitaries U_A (x) U_B act as
/// a -> O_A a, b -> O_B b, T -> O_A T O_B^T.
class RMatrix {
 public:
  RMatrix() = default;
  explicit RMatrix(const Eigen::Matrix4d& entries) : r_(entries) {
    if (std::abs(r_(0, 0) - 1.0) > kNormTolerance) throw ArgumentError("R(0,0) must equal 1");
    if (r_.cwiseAbs().maxCoeff() > 1.0 + kNormTolerance) throw ArgumentError("R entries must lie in [-1, 1]");
  }

  static RMatrix from_parts(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Matrix3d& t) {
    Eigen::Matrix4d r;
    r(0, 0) = 1.0;
    r.block<3, 1>(1, 0) = a;
    r.block<1, 3>(0, 1) = b.transpose();
    r.block<3, 3>(1, 1) = t;
    return RMatrix(r);
  }

  const Eigen::Matrix4d& entries() const noexcept { return r_; }
  double operator()(int mu, int nu) const { return r_(mu, nu); }
  Eigen::Vector3d a() const { return r_.block<3, 1>(1, 0); }
  Eigen::Vector3d b() const { return r_.block<1, 3>(0, 1).transpose(); }
  Eigen::Matrix3d T() const { return r_.block<3, 3>(1, 1); }

  double second_moment() const { return r_.array().square().sum(); }
  double fourth_moment() const { return r_.array().square().square().sum(); }

  /// Flattened into the lexicographic Pauli-vector order (index 4 mu + nu).
  Eigen::VectorXd pauli_vector() const {
    Eigen::VectorXd v(16);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) v(4 * mu + nu) = r_(mu, nu);
    return v;
  }

  /// Image under the local rotation (O_A, O_B).
  RMatrix rotated(const Eigen::Matrix3d& oa, const Eigen::Matrix3d& ob) const {
    Eigen::Matrix4d out;
    out(0, 0) = 1.0;
    out.block<3, 1>(1, 0) = oa * a();
    out.block<1, 3>(0, 1) = (ob * b()).transpose();
    out.block<3, 3>(1, 1) = oa * T() * ob.transpose();
    RMatrix r;
    r.r_ = out;
    return r;
  }

 private:
  Eigen::Matrix4d r_ = Eigen::Matrix4d::Identity();
};

inline RMatrix r_matrix(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw ArgumentError("r_matrix needs a two-qubit state");
  const Eigen::VectorXd v = pauli_expectations(rho);
  Eigen::Matrix4d r;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) r(mu, nu) = v(4 * mu + nu);
  return RMatrix(r);
}

/// rho = 1/4 sum R_{mu nu} sigma_mu (x) sigma_nu.
inline DensityMatrix density_matrix(const RMatrix& r) { return DensityMatrix(operator_from_pauli(r.pauli_vector())); }

/// Second stabilizer Renyi entropy from Pauli moments: -ln(sum <P>^4 / sum <P>^2).
inline double sre2_from_moments(double second, double fourth) { return -std::log(fourth / second); }

inline double sre2(const RMatrix& r) { return sre2_from_moments(r.second_moment(), r.fourth_moment()); }

inline double sre2_pure(const StateVector& psi) {
  const PauliMoments m = pauli_moments(psi);
  const double dim = static_cast<double>(psi.dim());
  return std::max(0.0, -std::log(m.fourth / dim));
}

inline double sre2_mixed(const DensityMatrix& rho) {
  const Eigen::VectorXd v = pauli_expectations(rho);
  return sre2_from_moments(v.squaredNorm(), v.array().square().square().sum());
}

namespace detail {
/// True when v has at most one component above tol in magnitude.
inline bool single_axis(const Eigen::Vector3d& v, double tol) {
  int big = 0;
  for (int i = 0; i < 3; ++i) big += std::abs(v(i)) > tol;
  return big <= 1;
}
}  // namespace detail

/// Both Bloch vectors along a single axis (or zero) and T diagonal.
inline bool is_canonical_form(const RMatrix& r, double tol = 1e-8) {
  const Eigen::Matrix3d t = r.T();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j && std::abs(t(i, j)) > tol) return false;
  return detail::single_axis(r.a(), tol) && detail::single_axis(r.b(), tol);
}

/// Two-qubit pure-state NN from the Schmidt angle: ln(8 / (7 + cos 8 theta)).
inline double nn_from_schmidt_angle(double theta) { return std::log(8.0 / (7.0 + std::cos(8.0 * theta))); }

inline double nn_two_qubit_pure_analytic(const StateVector& psi) {
  return nn_from_schmidt_angle(schmidt_spectrum(psi).theta);
}

/// Largest NN any two-qubit pure state carries, attained at theta = pi/8.
inline double max_two_qubit_nn() { return std::log(4.0 / 3.0); }

/// M(whole) - M(rho_A) - M(rho_B); may be negative.
inline double mutual_sre(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw ArgumentError("mutual_sre needs a two-qubit state");
  return sre2_mixed(rho) - sre2_mixed(partial_trace(rho, 0)) - sre2_mixed(partial_trace(rho, 1));
}

inline double mutual_sre(const StateVector& psi) {
  if (psi.n_qubits() != 2) throw ArgumentError("mutual_sre needs a two-qubit state");
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  return sre2_pure(psi) - sre2_mixed(partial_trace(rho, 0)) - sre2_mixed(partial_trace(rho, 1));
}

/// Density of y = NN over Haar-random two-qubit pure states, y in (0, ln 4/3).
inline double haar_nn_pdf(double y) {
  if (!(y > 0.0) || !(y < max_two_qubit_nn())) return 0.0;
  const double eh = std::exp(y / 2.0);
  // 4 - 3 e^y and e^y - 1 written to stay accurate at both ends of the support.
  const double z = std::sqrt(-4.0 * std::expm1(y - max_two_qubit_nn()));
  const double u = z / eh;
  const double bracket = (eh + z) * std::sqrt(std::max(0.0, 1.0 - u)) + (eh - z) * std::sqrt(1.0 + u);
  return 3.0 / (4.0 * eh * z * std::sqrt(2.0 * std::expm1(y))) * bracket;
}

namespace detail {
template <class F>
double integrate_nn_support(F&& f, double lo, double hi) {
  // Both endpoints of the support carry integrable singularities.
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, lo, hi, 1e-10);
}
}  // namespace detail

/// Integral of haar_nn_pdf over [lo, hi], clipped to the support.
inline double haar_nn_probability(double lo, double hi) {
  lo = std::max(lo, 0.0);
  hi = std::min(hi, max_two_qubit_nn());
  if (hi <= lo) return 0.0;
  return detail::integrate_nn_support([](double y) { return haar_nn_pdf(y); }, lo, hi);
}

inline double haar_nn_mean() {
  return detail::integrate_nn_support([](double y) { return y * haar_nn_pdf(y); }, 0.0, max_two_qubit_nn());
}

/// Power-law channel of a two-point correlator: C ~ r^-alpha + constant.
struct DecayChannel {
  double alpha = std::numeric_limits<double>::infinity();
  double constant = 0.0;
};

struct ExponentLawInput {
  std::vector<DecayChannel> channels;
};

/// Decay exponent of the two-point SRE: min(2 alpha*, alpha-bar), with
/// alpha* the slowest channel and alpha-bar the slowest channel whose
/// disconnected part is nonzero.
inline double exponent_law(const ExponentLawInput& in) {
  double alpha_star = std::numeric_limits<double>::infinity();
  double alpha_bar = std::numeric_limits<double>::infinity();
  for (const auto& ch : in.channels) {
    alpha_star = std::min(alpha_star, ch.alpha);
    if (ch.constant != 0.0) alpha_bar = std::min(alpha_bar, ch.alpha);
  }
  if (!std::isfinite(alpha_star)) throw DomainError("exponent_law needs at least one finite exponent");
  return std::min(2.0 * alpha_star, alpha_bar);
}

}  // namespace nnmagic
