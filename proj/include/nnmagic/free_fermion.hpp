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

// Periodic transverse-field Ising chain  H = -sum sx_j sx_{j+1} - h sum sz_j
// solved through a Jordan-Wigner mapping onto Majorana operators
//   g_{2j} = S_j sx_j,  g_{2j+1} = S_j sy_j,  S_j = prod_{k<j} sz_k.
// The even sector of prod sz carries antiperiodic fermions.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "nnmagic/errors.hpp"

namespace nnmagic {

struct IsingCorrelators {
  double sz = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
  /// Set when a string determinant was computed from an ill-conditioned matrix.
  bool precision_warning = false;
};

class FreeFermionChain {
 public:
  FreeFermionChain(std::size_t length, double field) : L_(length), h_(field) {
    if (L_ < 2) throw ArgumentError("chain length must be at least 2");
    if (!(h_ >= 0.0)) throw ArgumentError("transverse field must be non-negative");
    const auto n = static_cast<Eigen::Index>(2 * L_);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    auto couple = [&](Eigen::Index p, Eigen::Index q, double c) {
      a(p, q) += 2.0 * c;
      a(q, p) -= 2.0 * c;
    };
    for (std::size_t j = 0; j < L_; ++j) {
      const auto e = static_cast<Eigen::Index>(2 * j);
      couple(e, e + 1, h_);
      couple(e + 1, (e + 2) % n, j + 1 == L_ ? -1.0 : 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-(a * a));
    const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
    gamma_ = a * es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
    energy_ = 0.25 * (a * gamma_).trace();
  }

  std::size_t length() const noexcept { return L_; }
  double field() const noexcept { return h_; }
  double energy() const noexcept { return energy_; }
  /// Gamma_ab = -i <g_a g_b> for a != b.
  const Eigen::MatrixXd& majorana_covariance() const noexcept { return gamma_; }

  /// Closed-form ground energy in the even sector.
  static double exact_energy(std::size_t length, double field) {
    double e = 0.0;
    for (std::size_t m = 0; m < length; ++m) {
      const double k = (2.0 * static_cast<double>(m) + 1.0) * std::numbers::pi / static_cast<double>(length);
      e -= std::sqrt(1.0 + field * field - 2.0 * field * std::cos(k));
    }
    return e;
  }

  /// Single-site and two-point correlators between sites i and i + r.
  IsingCorrelators correlators(std::size_t r, std::size_t i = 0) const {
    if (r < 1 || r >= L_) throw ArgumentError("separation must lie in [1, L)");
    if (i + r >= L_) throw ArgumentError("site pair must not wrap the chain");
    const auto g = [&](std::size_t p, std::size_t q) { return gamma_(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)); };
    IsingCorrelators out;
    out.sz = g(2 * i, 2 * i + 1);
    const std::size_t j = i + r;
    out.zz = g(2 * i, 2 * i + 1) * g(2 * j, 2 * j + 1) - g(2 * i, 2 * j) * g(2 * i + 1, 2 * j + 1) +
             g(2 * i, 2 * j + 1) * g(2 * i + 1, 2 * j);

    const auto n = static_cast<Eigen::Index>(r);
    Eigen::MatrixXd gx(n, n), gy(n, n);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        gx(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = g(2 * (i + a) + 1, 2 * (i + b) + 2);
        gy(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = g(2 * (i + a), 2 * (i + b + 1) + 1);
      }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lx(gx), ly(gy);
    out.xx = lx.determinant();
    out.yy = (r % 2 ? -1.0 : 1.0) * ly.determinant();
    out.precision_warning = lx.rcond() < 1e-12 || ly.rcond() < 1e-12;
    return out;
  }

 private:
  std::size_t L_;
  double h_;
  Eigen::MatrixXd gamma_;
  double energy_ = 0.0;
};

}  // namespace nnmagic
