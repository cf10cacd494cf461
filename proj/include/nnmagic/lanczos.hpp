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

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

#include "nnmagic/errors.hpp"

namespace nnmagic {

struct LanczosOptions {
  std::size_t max_iterations = 400;
  /// Stop once the Ritz residual falls below tolerance * max(1, |eigenvalue|).
  double tolerance = 1e-10;
};

struct LanczosResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  std::size_t iterations = 0;
  /// ||A x - lambda x|| of the returned pair.
  double residual = 0.0;
};

/// Lowest eigenpair of a real symmetric operator given as apply(in, out),
/// with full reorthogonalization. The search stays inside the Krylov space of
/// start, so symmetry sectors are respected.
template <class Apply>
LanczosResult lanczos_lowest(Apply&& apply, Eigen::VectorXd start, const LanczosOptions& opt = {}) {
  const double start_norm = start.norm();
  if (!(start_norm > 0.0)) throw ArgumentError("Lanczos start vector must be nonzero");
  std::vector<Eigen::VectorXd> basis;
  basis.push_back(start / start_norm);
  std::vector<double> alpha, beta;
  Eigen::VectorXd w(start.size());

  Eigen::VectorXd ritz;
  double theta = 0.0;
  for (std::size_t k = 0; k < opt.max_iterations; ++k) {
    apply(basis[k], w);
    const double a = basis[k].dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) w -= v.dot(w) * v;
    const double b = w.norm();

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(Eigen::Map<const Eigen::VectorXd>(alpha.data(), m),
                               Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1));
    theta = tri.eigenvalues()(0);
    ritz = tri.eigenvectors().col(0);
    const double estimate = b * std::abs(ritz(m - 1));
    const bool invariant = b <= 1e-14 * std::max(1.0, std::abs(a));
    if (invariant || estimate < opt.tolerance * std::max(1.0, std::abs(theta))) {
      LanczosResult out;
      out.eigenvalue = theta;
      out.eigenvector = Eigen::VectorXd::Zero(start.size());
      for (Eigen::Index j = 0; j < m; ++j) out.eigenvector += ritz(j) * basis[static_cast<std::size_t>(j)];
      out.eigenvector.normalize();
      out.iterations = k + 1;
      apply(out.eigenvector, w);
      out.residual = (w - theta * out.eigenvector).norm();
      return out;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  throw SolverError("Lanczos did not converge within the iteration cap");
}

}  // namespace nnmagic
