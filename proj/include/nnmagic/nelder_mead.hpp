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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "nnmagic/errors.hpp"

namespace nnmagic {

struct NelderMeadOptions {
  std::size_t max_iterations = 5000;
  /// Stop when max f - min f over the simplex drops below this.
  double f_tolerance = 1e-12;
  /// Or when every vertex lies within this distance of the best one.
  double x_tolerance = 1e-10;
  /// Edge length of the axis-aligned initial simplex.
  double initial_step = 0.25;
};

struct NelderMeadResult {
  std::vector<double> argmin;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Downhill simplex with coefficients (reflect 1, expand 2, contract 1/2, shrink 1/2).
template <class Objective>
NelderMeadResult nelder_mead(Objective&& objective, std::span<const double> start, const NelderMeadOptions& opt = {}) {
  const std::size_t k = start.size();
  if (k == 0) throw std::invalid_argument("nelder_mead needs at least one parameter");

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    const double v = objective(std::span<const double>(x));
    ++res.evaluations;
    if (!std::isfinite(v)) throw OptimizationError("objective returned a non-finite value", x);
    return v;
  };

  std::vector<std::vector<double>> pts(k + 1, std::vector<double>(start.begin(), start.end()));
  for (std::size_t i = 0; i < k; ++i) pts[i + 1][i] += opt.initial_step;
  std::vector<double> fv(k + 1);
  for (std::size_t i = 0; i <= k; ++i) fv[i] = eval(pts[i]);

  std::vector<std::size_t> order(k + 1);
  std::vector<double> centroid(k), trial(k), trial2(k);
  auto along = [&](double t, std::vector<double>& out) {
    // centroid + t (centroid - worst)
    const auto& worst = pts[order[k]];
    for (std::size_t i = 0; i < k; ++i) out[i] = centroid[i] + t * (centroid[i] - worst[i]);
  };

  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[k], second = order[k - 1];

    double diameter = 0.0;
    for (std::size_t v = 1; v <= k; ++v)
      for (std::size_t i = 0; i < k; ++i) diameter = std::max(diameter, std::abs(pts[order[v]][i] - pts[best][i]));
    if (fv[worst] - fv[best] <= opt.f_tolerance || diameter <= opt.x_tolerance) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < k; ++v)
      for (std::size_t i = 0; i < k; ++i) centroid[i] += pts[order[v]][i];
    for (auto& c : centroid) c /= static_cast<double>(k);

    along(1.0, trial);
    const double fr = eval(trial);
    if (fr < fv[best]) {
      along(2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        fv[worst] = fe;
      } else {
        pts[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    // Outside contraction when the reflection beat the worst vertex, inside otherwise.
    const bool outside = fr < fv[worst];
    along(outside ? 0.5 : -0.5, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : fv[worst])) {
      pts[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t v = 1; v <= k; ++v) {
      auto& p = pts[order[v]];
      for (std::size_t i = 0; i < k; ++i) p[i] = pts[best][i] + 0.5 * (p[i] - pts[best][i]);
      fv[order[v]] = eval(p);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.argmin = pts[best];
  res.value = fv[best];
  return res;
}

}  // namespace nnmagic
