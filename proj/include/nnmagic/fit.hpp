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

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "nnmagic/errors.hpp"

namespace nnmagic {

struct FitWindow {
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
};

/// y = amplitude * r^(-alpha) + offset.
struct FitResult {
  double amplitude = 0.0;
  double alpha = 0.0;
  double offset = 0.0;
  /// Standard error of alpha from the log-log regression at the chosen offset.
  double alpha_stderr = 0.0;
  /// Euclidean norm of y - fit over the window.
  double residual = 0.0;
  FitWindow window;
  std::size_t n_points = 0;
};

namespace detail {

struct LogLogLine {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

inline LogLogLine loglog_regression(std::span<const double> r, std::span<const double> y, double offset) {
  const auto n = static_cast<double>(r.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double u = std::log(r[i]);
    const double v = std::log(y[i] - offset);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  const double det = n * sxx - sx * sx;
  LogLogLine line;
  line.slope = (n * sxy - sx * sy) / det;
  line.intercept = (sy - line.slope * sx) / n;
  double sse = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double e = std::log(y[i] - offset) - line.intercept - line.slope * std::log(r[i]);
    sse += e * e;
  }
  line.slope_stderr = r.size() > 2 ? std::sqrt(sse / (n - 2) * n / det) : 0.0;
  return line;
}

inline double linear_residual(std::span<const double> r, std::span<const double> y, double offset, const LogLogLine& line) {
  double sse = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double e = y[i] - offset - std::exp(line.intercept) * std::pow(r[i], line.slope);
    sse += e * e;
  }
  return std::sqrt(sse);
}

}  // namespace detail

/// Least-squares power law with optional constant offset. The offset
/// minimizes the linear-space residual; each candidate offset is solved by
/// regression on (ln r, ln(y - c)).
inline FitResult fit_power_law(std::span<const double> r, std::span<const double> y, FitWindow window, bool with_offset) {
  if (r.size() != y.size()) throw ArgumentError("fit inputs differ in length");
  std::vector<double> rs, ys;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= window.r_min && r[i] <= window.r_max) {
      if (!(r[i] > 0.0)) throw FitError("fit abscissae must be positive");
      rs.push_back(r[i]);
      ys.push_back(y[i]);
    }
  if (rs.size() < 4) throw FitError("fit window holds fewer than four points");
  const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
  const double y_min = *lo_it, y_max = *hi_it;

  double offset = 0.0;
  if (with_offset) {
    const double span = y_max - y_min;
    if (!(span > 0.0)) throw FitError("fit data are constant");
    // The residual is multimodal in c, so scan log-spaced gaps d = y_min - c
    // before refining the best bracket.
    auto cost = [&](double c) { return detail::linear_residual(rs, ys, c, detail::loglog_regression(rs, ys, c)); };
    const double d_lo = 1e-12 * std::max(span, std::abs(y_min));
    const double d_hi = 10.0 * span;
    constexpr int kGrid = 400;
    std::vector<double> gaps(kGrid + 1);
    for (int k = 0; k <= kGrid; ++k) gaps[static_cast<std::size_t>(k)] = d_lo * std::pow(d_hi / d_lo, static_cast<double>(k) / kGrid);
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < gaps.size(); ++k) {
      const double v = cost(y_min - gaps[k]);
      if (v < best_cost) {
        best_cost = v;
        best = k;
      }
    }
    const double hi = y_min - gaps[best == 0 ? 0 : best - 1];
    const double lo = y_min - gaps[std::min(best + 1, gaps.size() - 1)];
    offset = boost::math::tools::brent_find_minima(cost, lo, hi, std::numeric_limits<double>::digits).first;
    if (cost(offset) > best_cost) offset = y_min - gaps[best];
  } else if (!(y_min > 0.0)) {
    throw FitError("power-law fit needs positive values");
  }

  const auto line = detail::loglog_regression(rs, ys, offset);
  FitResult out;
  out.amplitude = std::exp(line.intercept);
  out.alpha = -line.slope;
  out.offset = offset;
  out.alpha_stderr = line.slope_stderr;
  out.residual = detail::linear_residual(rs, ys, offset, line);
  out.window = window;
  out.n_points = rs.size();
  if (!std::isfinite(out.alpha) || !std::isfinite(out.amplitude)) throw FitError("power-law fit produced non-finite parameters");
  return out;
}

}  // namespace nnmagic
