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

// Dense two-phase simplex for  min c.x  s.t.  A x = b,  x >= 0.
// Bland's rule on both the entering and the leaving variable, so the method
// cannot cycle on degenerate vertices.

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <vector>

#include "nnmagic/errors.hpp"

namespace nnmagic {

struct LinearProgram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct SimplexOptions {
  std::size_t max_pivots = 20000;
  double pivot_tolerance = 1e-10;
  double feasibility_tolerance = 1e-9;
};

struct LPSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  std::size_t pivots = 0;
  /// Equality rows found linearly dependent and dropped in phase 1.
  std::size_t redundant_rows = 0;
};

namespace detail {

class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram& lp, const SimplexOptions& opt)
      : m_(lp.A.rows()), n_(lp.A.cols()), opt_(opt), t_(Eigen::MatrixXd::Zero(m_ + 1, n_ + m_ + 1)), basis_(m_) {
    if (lp.b.size() != m_ || lp.c.size() != n_) throw ArgumentError("linear program dimensions are inconsistent");
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = lp.b(i) < 0 ? -1.0 : 1.0;
      t_.block(i, 0, 1, n_) = sign * lp.A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign * lp.b(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
    active_.assign(static_cast<std::size_t>(m_), true);
  }

  LPSolution solve(const Eigen::VectorXd& c) {
    // Phase 1: minimize the sum of artificials.
    t_.row(m_).setZero();
    for (Eigen::Index i = 0; i < m_; ++i) t_.row(m_) -= t_.row(i);
    for (Eigen::Index j = n_; j < n_ + m_; ++j) t_(m_, j) = 0.0;
    iterate(n_ + m_);
    if (-t_(m_, rhs()) > opt_.feasibility_tolerance) throw SolverError("linear program is infeasible");
    drive_out_artificials();

    // Phase 2 over the original columns.
    t_.row(m_).setZero();
    t_.block(m_, 0, 1, n_) = c.transpose();
    for (Eigen::Index i = 0; i < m_; ++i)
      if (active(i) && basis_[static_cast<std::size_t>(i)] < n_) t_.row(m_) -= c(basis_[static_cast<std::size_t>(i)]) * t_.row(i);
    iterate(n_);

    LPSolution sol;
    sol.x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (active(i) && basis_[static_cast<std::size_t>(i)] < n_) sol.x(basis_[static_cast<std::size_t>(i)]) = t_(i, rhs());
    sol.objective = c.dot(sol.x);
    sol.pivots = pivots_;
    for (bool a : active_) sol.redundant_rows += !a;
    return sol;
  }

 private:
  Eigen::Index rhs() const { return n_ + m_; }
  bool active(Eigen::Index i) const { return active_[static_cast<std::size_t>(i)]; }

  void pivot(Eigen::Index r, Eigen::Index s) {
    if (++pivots_ > opt_.max_pivots) throw SolverError("simplex pivot limit exceeded");
    t_.row(r) /= t_(r, s);
    for (Eigen::Index i = 0; i <= m_; ++i)
      if (i != r && t_(i, s) != 0.0) t_.row(i) -= t_(i, s) * t_.row(r);
    basis_[static_cast<std::size_t>(r)] = s;
  }

  // Columns [0, allowed) may enter.
  void iterate(Eigen::Index allowed) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j)
        if (t_(m_, j) < -opt_.pivot_tolerance) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!active(i) || t_(i, enter) <= opt_.pivot_tolerance) continue;
        const double ratio = t_(i, rhs()) / t_(i, enter);
        if (ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && leave >= 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) throw SolverError("linear program is unbounded");
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < n_; ++j)
        if (std::abs(t_(i, j)) > opt_.pivot_tolerance) {
          col = j;
          break;
        }
      if (col >= 0)
        pivot(i, col);
      else
        active_[static_cast<std::size_t>(i)] = false;
    }
  }

  Eigen::Index m_, n_;
  SimplexOptions opt_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> active_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

inline LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {}) {
  detail::SimplexTableau tableau(lp, opt);
  return tableau.solve(lp.c);
}

}  // namespace nnmagic
