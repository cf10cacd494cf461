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

// Monitored brick-wall circuits of Haar two-qubit gates on a periodic chain,
// with z measurements at rate p, and the NN observables averaged over
// trajectories.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "nnmagic/fit.hpp"
#include "nnmagic/measurement.hpp"
#include "nnmagic/optim.hpp"
#include "nnmagic/parallel.hpp"
#include "nnmagic/scan.hpp"

namespace nnmagic {

inline constexpr std::size_t kMaxCircuitLength = 16;

struct CircuitConfig {
  std::size_t L = 12;
  double p = 0.17;
  /// Number of gate layers; 0 selects 4L.
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  /// Measurement rounds follow every measure_every-th layer (and the last).
  std::size_t measure_every = 1;

  std::size_t layers() const noexcept { return depth == 0 ? 4 * L : depth; }

  void validate() const {
    if (L < 4 || L % 2) throw ArgumentError("circuit length must be even and at least 4");
    if (L > kMaxCircuitLength) throw UnsupportedSizeError("statevector circuits are capped at L = 16");
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("measurement rate must lie in [0, 1]");
    if (measure_every < 1) throw ArgumentError("measure_every must be positive");
  }
};

struct MeasurementEvent {
  std::size_t layer = 0;
  std::size_t site = 0;
  int outcome = 0;

  bool operator==(const MeasurementEvent&) const = default;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::size_t trajectory = 0;
  std::vector<MeasurementEvent> outcomes;
  /// Per-r observables keyed by measure name, filled by the scans.
  std::map<std::string, std::vector<double>> observables;

  bool operator==(const TrajectoryRecord&) const = default;
};

namespace detail {

// Stream key separating measurement draws from gate draws.
inline constexpr std::uint64_t kMeasurementStream = 0x6d656173ULL;

inline std::vector<std::pair<std::size_t, std::size_t>> brick_pairs(std::size_t L, std::size_t layer) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = layer % 2; a < L; a += 2) pairs.emplace_back(a, (a + 1) % L);
  return pairs;
}

inline void apply_layer(CVector& amps, const CircuitConfig& cfg, std::size_t trajectory, std::size_t layer) {
  const auto pairs = brick_pairs(cfg.L, layer);
  for (std::size_t bond = 0; bond < pairs.size(); ++bond) {
    Rng rng = derive_rng(cfg.seed, {trajectory, layer, bond});
    const CMatrix u = haar_random_unitary(4, rng);
    const std::size_t t[] = {pairs[bond].first, pairs[bond].second};
    apply_gate_inplace(amps, cfg.L, u, std::span<const std::size_t>(t));
  }
}

inline bool measures_after(const CircuitConfig& cfg, std::size_t layer) {
  return (layer + 1) % cfg.measure_every == 0 || layer + 1 == cfg.layers();
}

inline double probability_one(const CVector& amps, std::size_t n, std::size_t site) {
  const std::size_t mask = std::size_t{1} << bit_position(site, n);
  double p1 = 0.0;
  for (Eigen::Index s = 0; s < amps.size(); ++s)
    if (static_cast<std::size_t>(s) & mask) p1 += std::norm(amps(s));
  return p1;
}

inline void project(CVector& amps, std::size_t n, std::size_t site, int outcome) {
  const std::size_t mask = std::size_t{1} << bit_position(site, n);
  for (Eigen::Index s = 0; s < amps.size(); ++s)
    if (((static_cast<std::size_t>(s) & mask) != 0) != (outcome == 1)) amps(s) = 0.0;
  const double norm = amps.norm();
  if (!(norm > 0.0)) throw DomainError("projection onto a zero-probability outcome");
  amps /= norm;
}

}  // namespace detail

/// One circuit trajectory from |0...0>. Gates are keyed by (seed,
/// trajectory, layer, bond); measurement draws come from a per-trajectory
/// stream.
inline std::pair<StateVector, TrajectoryRecord> run_trajectory(const CircuitConfig& cfg, std::size_t trajectory = 0) {
  cfg.validate();
  CVector amps = StateVector::basis(cfg.L, 0).amplitudes();
  TrajectoryRecord rec{cfg.seed, trajectory, {}, {}};
  Rng meas = derive_rng(cfg.seed, {trajectory, detail::kMeasurementStream});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t layer = 0; layer < cfg.layers(); ++layer) {
    detail::apply_layer(amps, cfg, trajectory, layer);
    if (!detail::measures_after(cfg, layer)) continue;
    for (std::size_t site = 0; site < cfg.L; ++site) {
      const double coin = unit(meas);
      const double born = unit(meas);
      if (coin >= cfg.p) continue;
      const int outcome = born < detail::probability_one(amps, cfg.L, site) ? 1 : 0;
      detail::project(amps, cfg.L, site, outcome);
      rec.outcomes.push_back({layer, site, outcome});
    }
  }
  return {StateVector(amps), std::move(rec)};
}

/// Rebuilds the final state of a trajectory from its outcome log.
inline StateVector replay(const CircuitConfig& cfg, const TrajectoryRecord& rec) {
  cfg.validate();
  CircuitConfig c = cfg;
  c.seed = rec.seed;
  CVector amps = StateVector::basis(c.L, 0).amplitudes();
  std::size_t next = 0;
  for (std::size_t layer = 0; layer < c.layers(); ++layer) {
    detail::apply_layer(amps, c, rec.trajectory, layer);
    for (; next < rec.outcomes.size() && rec.outcomes[next].layer == layer; ++next)
      detail::project(amps, c.L, rec.outcomes[next].site, rec.outcomes[next].outcome);
  }
  if (next != rec.outcomes.size()) throw ArgumentError("outcome log does not match the circuit");
  return StateVector(amps);
}

/// Per-trajectory observables on a list of separations; rows of failed
/// trajectories are dropped.
struct TrajectorySamples {
  std::vector<std::size_t> rs;
  /// values[name][t][k]: measure name, kept trajectory t, separation rs[k].
  std::map<std::string, std::vector<std::vector<double>>> values;
  std::size_t n_traj = 0;
  std::size_t n_failed = 0;
};

namespace detail {

template <class Body>
TrajectorySamples collect(const CircuitConfig& cfg, const std::vector<std::size_t>& rs, std::size_t n_traj, Body&& body,
                          std::vector<TrajectoryRecord>* dump) {
  cfg.validate();
  for (std::size_t r : rs)
    if (r < 1 || r >= cfg.L) throw ArgumentError("separation must lie in [1, L)");
  std::vector<std::optional<TrajectoryRecord>> slots(n_traj);
  parallel_for(n_traj, [&](std::size_t t) {
    try {
      auto [psi, rec] = run_trajectory(cfg, t);
      body(psi, t, rec);
      slots[t] = std::move(rec);
    } catch (const OptimizationError&) {
    } catch (const SolverError&) {
    }
  });
  TrajectorySamples out;
  out.rs = rs;
  out.n_traj = n_traj;
  for (auto& s : slots) {
    if (!s) {
      ++out.n_failed;
      continue;
    }
    for (const auto& [name, row] : s->observables) out.values[name].push_back(row);
    if (dump) dump->push_back(std::move(*s));
  }
  return out;
}

}  // namespace detail

/// Trajectory mean and standard error of one measure at each separation.
inline std::vector<ScanRecord> summarize(const TrajectorySamples& samples, const CircuitConfig& cfg) {
  std::vector<ScanRecord> out;
  for (std::size_t k = 0; k < samples.rs.size(); ++k)
    for (const auto& [name, rows] : samples.values) {
      double sum = 0, sum2 = 0;
      for (const auto& row : rows) {
        sum += row[k];
        sum2 += row[k] * row[k];
      }
      const auto n = static_cast<double>(rows.size());
      ScanRecord rec;
      rec.backend = "statevector";
      rec.L = cfg.L;
      rec.r = samples.rs[k];
      rec.axis = "z";
      rec.measure_name = name;
      rec.value = n > 0 ? sum / n : 0.0;
      rec.stderr_ = n > 1 ? std::sqrt(std::max(0.0, (sum2 / n - rec.value * rec.value) / (n - 1))) : 0.0;
      rec.n_samples = rows.size();
      rec.seed = cfg.seed;
      rec.p = cfg.p;
      rec.depth = cfg.layers();
      rec.n_traj = samples.n_traj;
      rec.n_failed = samples.n_failed;
      out.push_back(std::move(rec));
    }
  return out;
}

/// Default optimizer budget per (trajectory, r) point.
inline OptimizerConfig circuit_optimizer_config() {
  OptimizerConfig c;
  c.n_starts = 30;
  return c;
}

/// Per trajectory and r: NN of rho_{0,r} by numerical optimization ("nn"),
/// its SRE ("sre2") and mutual information ("mutual_information").
inline TrajectorySamples averaged_nn_samples(const CircuitConfig& cfg, const std::vector<std::size_t>& rs, std::size_t n_traj,
                                             const OptimizerConfig& opt = circuit_optimizer_config(),
                                             std::vector<TrajectoryRecord>* dump = nullptr) {
  return detail::collect(
      cfg, rs, n_traj,
      [&](const StateVector& psi, std::size_t t, TrajectoryRecord& rec) {
        auto& nn = rec.observables["nn"];
        auto& m = rec.observables["sre2"];
        auto& mi = rec.observables["mutual_information"];
        for (std::size_t r : rs) {
          const DensityMatrix rho = partial_trace(psi, {0, r});
          OptimizerConfig o = opt;
          o.seed = derive_rng(cfg.seed, {t, r, 1})();
          nn.push_back(nn_optimize(rho, o).value);
          m.push_back(sre2_mixed(rho));
          mi.push_back(mutual_information(rho));
        }
      },
      dump);
}

inline std::vector<ScanRecord> averaged_nn_scan(const CircuitConfig& cfg, const std::vector<std::size_t>& rs, std::size_t n_traj,
                                                const OptimizerConfig& opt = circuit_optimizer_config(),
                                                std::vector<TrajectoryRecord>* dump = nullptr) {
  return summarize(averaged_nn_samples(cfg, rs, n_traj, opt, dump), cfg);
}

/// Exact outcome enumeration up to this length; one Born-sampled outcome per
/// trajectory beyond it.
inline constexpr std::size_t kMaxCircuitEnumerateLength = 12;

/// Per trajectory and r, after z-measuring every qubit except 0 and r:
/// MINN ("minn"), the post-measurement SRE ("sre2_post") and the
/// pre-measurement mutual information ("mutual_information").
inline TrajectorySamples minn_samples(const CircuitConfig& cfg, const std::vector<std::size_t>& rs, std::size_t n_traj,
                                      std::vector<TrajectoryRecord>* dump = nullptr) {
  const bool enumerate = cfg.L <= kMaxCircuitEnumerateLength;
  return detail::collect(
      cfg, rs, n_traj,
      [&](const StateVector& psi, std::size_t t, TrajectoryRecord& rec) {
        auto& minn_row = rec.observables["minn"];
        auto& post = rec.observables["sre2_post"];
        auto& mi = rec.observables["mutual_information"];
        for (std::size_t r : rs) {
          const auto branches = measurement_branches(psi.amplitudes(), cfg.L, 0, r);
          double nn = 0.0, m = 0.0;
          auto add = [&](const Branch& b, double w) {
            if (!(b.probability > 1e-300)) return;
            const StateVector pair{CVector(b.amplitudes)};
            nn += w * nn_two_qubit_pure_analytic(pair);
            m += w * sre2_pure(pair);
          };
          if (enumerate) {
            for (const auto& b : branches) add(b, b.probability);
          } else {
            std::vector<double> probs(branches.size());
            for (std::size_t o = 0; o < branches.size(); ++o) probs[o] = branches[o].probability;
            Rng rng = derive_rng(cfg.seed, {t, r, 2});
            add(branches[std::discrete_distribution<std::size_t>(probs.begin(), probs.end())(rng)], 1.0);
          }
          minn_row.push_back(nn);
          post.push_back(m);
          mi.push_back(mutual_information(psi, 0, r));
        }
      },
      dump);
}

inline std::vector<ScanRecord> minn_scan_mhc(const CircuitConfig& cfg, const std::vector<std::size_t>& rs, std::size_t n_traj,
                                             std::vector<TrajectoryRecord>* dump = nullptr) {
  return summarize(minn_samples(cfg, rs, n_traj, dump), cfg);
}

struct SwappingReport {
  static constexpr double reference_alpha_minn = 0.76;
  static constexpr double reference_alpha_ie = 3.31;

  bool conclusive = false;
  std::string note;
  FitResult minn_fit;
  FitResult ie_fit;
  /// Bootstrap standard errors over trajectories.
  double alpha_minn_stderr = 0.0;
  double alpha_ie_stderr = 0.0;
  double difference_stderr = 0.0;
  /// alpha_minn / alpha_ie.
  double ratio = 0.0;
  /// alpha_minn < alpha_ie / 2.
  bool swapping = false;
  /// swapping with the gap exceeding two combined standard errors.
  bool swapping_significant = false;
  /// alpha_minn < alpha_ie by more than two bootstrap standard errors.
  bool ordered_2sigma = false;
};

struct SwappingOptions {
  FitWindow window;
  std::size_t n_bootstrap = 200;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<double> column_means(const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& pick) {
  std::vector<double> m(rows.front().size(), 0.0);
  for (std::size_t t : pick)
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += rows[t][k];
  for (double& v : m) v /= static_cast<double>(pick.size());
  return m;
}

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0, ss = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// Compares the decay of MINN with that of the pre-measurement mutual
/// information. Both curves are trajectory means fitted by pure power laws;
/// uncertainties come from a paired bootstrap over trajectories.
inline SwappingReport swapping_diagnostic(const std::vector<std::size_t>& rs, const std::vector<std::vector<double>>& minn_rows,
                                          const std::vector<std::vector<double>>& ie_rows, const SwappingOptions& opt = {}) {
  SwappingReport rep;
  if (minn_rows.empty() || minn_rows.size() != ie_rows.size()) {
    rep.note = "inconclusive: no paired trajectories";
    return rep;
  }
  std::vector<double> r(rs.begin(), rs.end());
  std::vector<std::size_t> all(minn_rows.size());
  for (std::size_t t = 0; t < all.size(); ++t) all[t] = t;
  auto fit_both = [&](const std::vector<std::size_t>& pick) {
    const auto a = detail::column_means(minn_rows, pick);
    const auto b = detail::column_means(ie_rows, pick);
    return std::pair{fit_power_law(std::span<const double>(r), std::span<const double>(a), opt.window, false),
                     fit_power_law(std::span<const double>(r), std::span<const double>(b), opt.window, false)};
  };
  try {
    std::tie(rep.minn_fit, rep.ie_fit) = fit_both(all);
  } catch (const FitError& e) {
    rep.note = std::string("inconclusive: ") + e.what();
    return rep;
  }
  Rng rng = derive_rng(opt.seed, {detail::kMeasurementStream, 3});
  std::uniform_int_distribution<std::size_t> pick_one(0, all.size() - 1);
  std::vector<double> am, ai, diff;
  std::size_t failed = 0;
  for (std::size_t b = 0; b < opt.n_bootstrap && all.size() > 1; ++b) {
    std::vector<std::size_t> pick(all.size());
    for (auto& t : pick) t = pick_one(rng);
    try {
      const auto [fm, fi] = fit_both(pick);
      am.push_back(fm.alpha);
      ai.push_back(fi.alpha);
      diff.push_back(fi.alpha - fm.alpha);
    } catch (const FitError&) {
      ++failed;
    }
  }
  rep.alpha_minn_stderr = detail::sample_std(am);
  rep.alpha_ie_stderr = detail::sample_std(ai);
  rep.difference_stderr = detail::sample_std(diff);
  const double a_m = rep.minn_fit.alpha, a_i = rep.ie_fit.alpha;
  rep.ratio = a_m / a_i;
  rep.swapping = a_m < a_i / 2.0;
  rep.swapping_significant =
      a_i / 2.0 - a_m > 2.0 * std::sqrt(rep.alpha_minn_stderr * rep.alpha_minn_stderr + 0.25 * rep.alpha_ie_stderr * rep.alpha_ie_stderr);
  rep.ordered_2sigma = a_i - a_m > 2.0 * rep.difference_stderr;
  rep.conclusive = true;
  rep.note = failed ? std::to_string(failed) + " bootstrap fits failed" : "";
  return rep;
}

struct TrendResult {
  /// Least-squares slope of the trajectory-mean curve against r.
  double slope = 0.0;
  /// Bootstrap standard error of the slope over trajectories.
  double stderr_ = 0.0;
};

/// Linear trend in r of per-trajectory rows, with a bootstrap error.
inline TrendResult trend_in_r(const std::vector<std::size_t>& rs, const std::vector<std::vector<double>>& rows, std::size_t n_bootstrap = 200,
                              std::uint64_t seed = 0) {
  if (rows.empty() || rs.size() < 2) throw ArgumentError("trend needs at least one trajectory and two separations");
  auto slope = [&](const std::vector<double>& y) {
    double mr = 0, my = 0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      mr += static_cast<double>(rs[k]);
      my += y[k];
    }
    mr /= static_cast<double>(rs.size());
    my /= static_cast<double>(rs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      sxy += (static_cast<double>(rs[k]) - mr) * (y[k] - my);
      sxx += (static_cast<double>(rs[k]) - mr) * (static_cast<double>(rs[k]) - mr);
    }
    return sxy / sxx;
  };
  std::vector<std::size_t> all(rows.size());
  for (std::size_t t = 0; t < all.size(); ++t) all[t] = t;
  TrendResult out;
  out.slope = slope(detail::column_means(rows, all));
  Rng rng = derive_rng(seed, {detail::kMeasurementStream, 4});
  std::uniform_int_distribution<std::size_t> pick_one(0, all.size() - 1);
  std::vector<double> boot;
  for (std::size_t b = 0; b < n_bootstrap; ++b) {
    std::vector<std::size_t> pick(all.size());
    for (auto& t : pick) t = pick_one(rng);
    boot.push_back(slope(detail::column_means(rows, pick)));
  }
  out.stderr_ = detail::sample_std(boot);
  return out;
}

/// Row-wise a - b.
inline std::vector<std::vector<double>> row_difference(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) throw ArgumentError("row counts differ");
  std::vector<std::vector<double>> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].size() != b[t].size()) throw ArgumentError("row lengths differ");
    out[t].resize(a[t].size());
    for (std::size_t k = 0; k < a[t].size(); ++k) out[t][k] = a[t][k] - b[t][k];
  }
  return out;
}

inline SwappingReport swapping_diagnostic(const TrajectorySamples& samples, const SwappingOptions& opt = {}) {
  const auto m = samples.values.find("minn");
  const auto i = samples.values.find("mutual_information");
  if (m == samples.values.end() || i == samples.values.end()) {
    SwappingReport rep;
    rep.note = "inconclusive: samples lack MINN or mutual information";
    return rep;
  }
  return swapping_diagnostic(samples.rs, m->second, i->second, opt);
}

inline SwappingReport swapping_diagnostic(const CircuitConfig& cfg, const std::vector<std::size_t>& rs, std::size_t n_traj,
                                          SwappingOptions opt = {}) {
  opt.seed = cfg.seed;
  return swapping_diagnostic(minn_samples(cfg, rs, n_traj), opt);
}

}  // namespace nnmagic
