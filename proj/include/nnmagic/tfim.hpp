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

// Transverse-field Ising chain pipeline: ground states, two-site reduced
// states in canonical form, two-point NN and measurement-induced NN scans.

#include <bit>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nnmagic/fit.hpp"
#include "nnmagic/free_fermion.hpp"
#include "nnmagic/lanczos.hpp"
#include "nnmagic/magic.hpp"
#include "nnmagic/measurement.hpp"
#include "nnmagic/parallel.hpp"
#include "nnmagic/rng.hpp"
#include "nnmagic/scan.hpp"

namespace nnmagic {

enum class TfimBackend { ed, free_fermion };

inline const char* backend_name(TfimBackend b) { return b == TfimBackend::ed ? "ed" : "free_fermion"; }

inline constexpr std::size_t kMaxEdLength = 16;

struct TfimConfig {
  std::size_t L = 8;
  double h = 1.0;
  TfimBackend backend = TfimBackend::ed;

  void validate() const {
    if (L < 4) throw ArgumentError("chain length must be at least 4");
    if (!(h >= 0.0) || !std::isfinite(h)) throw ArgumentError("transverse field must be finite and non-negative");
    if (backend == TfimBackend::ed && L > kMaxEdLength) throw UnsupportedSizeError("exact diagonalization is capped at L = 16");
  }
};

struct GroundState {
  StateVector state;
  double energy = 0.0;
  std::size_t iterations = 0;
};

/// Even-parity (prod sz = +1) ground state by matrix-free Lanczos. Real
/// amplitudes, fixed to a positive sum.
inline GroundState ground_state_ed(const TfimConfig& cfg, const LanczosOptions& opt = {}) {
  TfimConfig c = cfg;
  c.backend = TfimBackend::ed;
  c.validate();
  const std::size_t L = c.L;
  const std::size_t dim = std::size_t{1} << L;
  std::vector<std::size_t> bonds(L);
  for (std::size_t j = 0; j < L; ++j) bonds[j] = (std::size_t{1} << j) | (std::size_t{1} << ((j + 1) % L));

  auto apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    for (std::size_t s = 0; s < dim; ++s) {
      const auto pc = static_cast<double>(std::popcount(s));
      double acc = -c.h * (static_cast<double>(L) - 2.0 * pc) * in(static_cast<Eigen::Index>(s));
      for (std::size_t m : bonds) acc -= in(static_cast<Eigen::Index>(s ^ m));
      out(static_cast<Eigen::Index>(s)) = acc;
    }
  };
  Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s)
    if (std::popcount(s) % 2 == 0) start(static_cast<Eigen::Index>(s)) = 1.0;

  LanczosResult res = lanczos_lowest(apply, start, opt);
  if (res.eigenvector.sum() < 0) res.eigenvector = -res.eigenvector;
  return GroundState{StateVector(res.eigenvector.cast<cplx>()), res.eigenvalue, res.iterations};
}

struct TwoSiteState {
  DensityMatrix rho;
  RMatrix r;
};

/// Reduced state of sites (i, j) and its R-matrix. A state with intact
/// symmetry has a canonical R-matrix; anything else raises.
inline TwoSiteState two_site_rdm_canonical(const StateVector& psi, std::size_t i, std::size_t j, double tol = 1e-7) {
  DensityMatrix rho = partial_trace(psi, {i, j});
  RMatrix r = r_matrix(rho);
  if (!is_canonical_form(r, tol)) throw SymmetryViolationError("two-site reduced state is not in canonical form");
  return TwoSiteState{std::move(rho), std::move(r)};
}

inline TwoSiteState two_site_rdm_canonical(const StateVector& psi, std::size_t r) { return two_site_rdm_canonical(psi, 0, r); }

/// Canonical two-site state assembled from the four chain correlators.
inline TwoSiteState two_site_from_correlators(const IsingCorrelators& c) {
  const Eigen::Vector3d bloch(0.0, 0.0, c.sz);
  const Eigen::Matrix3d t = Eigen::Vector3d(c.xx, c.yy, c.zz).asDiagonal();
  RMatrix r = RMatrix::from_parts(bloch, bloch, t);
  return TwoSiteState{density_matrix(r), r};
}

inline IsingCorrelators correlators_from_state(const StateVector& psi, std::size_t i, std::size_t j) {
  const RMatrix r = r_matrix(partial_trace(psi, {i, j}));
  IsingCorrelators c;
  c.sz = r(3, 0);
  c.xx = r(1, 1);
  c.yy = r(2, 2);
  c.zz = r(3, 3);
  return c;
}

/// Ground-state data shared by scans: an ED state or a free-fermion chain.
class TfimGroundState {
 public:
  explicit TfimGroundState(const TfimConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.backend == TfimBackend::ed)
      ed_ = ground_state_ed(cfg_);
    else
      ff_.emplace(cfg_.L, cfg_.h);
  }

  const TfimConfig& config() const noexcept { return cfg_; }
  double energy() const { return ed_ ? ed_->energy : ff_->energy(); }
  const GroundState& ed() const {
    if (!ed_) throw ArgumentError("ground state was not built with the ED backend");
    return *ed_;
  }

  IsingCorrelators correlators(std::size_t r) const {
    check_separation(r);
    return ed_ ? correlators_from_state(ed_->state, 0, r) : ff_->correlators(r);
  }

  /// Reduced state of sites 0 and r, canonical form enforced.
  TwoSiteState two_site(std::size_t r) const {
    check_separation(r);
    if (ed_) return two_site_rdm_canonical(ed_->state, 0, r);
    TwoSiteState s = two_site_from_correlators(ff_->correlators(r));
    if (!is_canonical_form(s.r, 1e-7)) throw SymmetryViolationError("two-site reduced state is not in canonical form");
    return s;
  }

 private:
  void check_separation(std::size_t r) const {
    if (r < 1 || r >= cfg_.L) throw ArgumentError("separation must lie in [1, L)");
  }

  TfimConfig cfg_;
  std::optional<GroundState> ed_;
  std::optional<FreeFermionChain> ff_;
};

namespace detail {

inline ScanRecord tfim_record(const TfimConfig& cfg, std::size_t r, std::string measure, double value) {
  ScanRecord rec;
  rec.backend = backend_name(cfg.backend);
  rec.L = cfg.L;
  rec.h = cfg.h;
  rec.r = r;
  rec.measure_name = std::move(measure);
  rec.value = value;
  return rec;
}

}  // namespace detail

/// For each separation r: two-point NN of sites (0, r), which equals
/// sre2_mixed because the reduced state is canonical, and the mutual
/// information. Records come out grouped by r.
inline std::vector<ScanRecord> two_point_nn_scan(const TfimGroundState& gs, const std::vector<std::size_t>& rs) {
  std::vector<std::vector<ScanRecord>> slots(rs.size());
  parallel_for(rs.size(), [&](std::size_t k) {
    const std::size_t r = rs[k];
    const TwoSiteState s = gs.two_site(r);
    slots[k].push_back(detail::tfim_record(gs.config(), r, "nn", sre2_mixed(s.rho)));
    slots[k].push_back(detail::tfim_record(gs.config(), r, "mutual_information", mutual_information(s.rho)));
  });
  std::vector<ScanRecord> out;
  for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  return out;
}

inline std::vector<ScanRecord> two_point_nn_scan(const TfimConfig& cfg, const std::vector<std::size_t>& rs) {
  return two_point_nn_scan(TfimGroundState(cfg), rs);
}

/// sz, xx, yy and zz correlators for each separation.
inline std::vector<ScanRecord> correlator_scan(const TfimGroundState& gs, const std::vector<std::size_t>& rs) {
  std::vector<std::vector<ScanRecord>> slots(rs.size());
  parallel_for(rs.size(), [&](std::size_t k) {
    const std::size_t r = rs[k];
    const IsingCorrelators c = gs.correlators(r);
    for (auto [name, v] : {std::pair{"sz", c.sz}, {"xx", c.xx}, {"yy", c.yy}, {"zz", c.zz}}) {
      ScanRecord rec = detail::tfim_record(gs.config(), r, name, v);
      rec.precision_warning = c.precision_warning;
      slots[k].push_back(rec);
    }
  });
  std::vector<ScanRecord> out;
  for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  return out;
}

/// MINN of sites (0, r) for each r on an ED ground state. Sample streams are
/// keyed by (seed, r, axis).
inline std::vector<ScanRecord> minn_scan(const TfimGroundState& gs, const std::vector<std::size_t>& rs, MeasurementAxis axis, MinnMode mode,
                                         std::uint64_t seed = 0) {
  const StateVector& psi = gs.ed().state;
  std::vector<ScanRecord> out(rs.size());
  parallel_for(rs.size(), [&](std::size_t k) {
    const std::size_t r = rs[k];
    if (r < 1 || r >= gs.config().L) throw ArgumentError("separation must lie in [1, L)");
    Rng rng = derive_rng(seed, {r, static_cast<std::uint64_t>(axis_name(axis))});
    const MinnResult m = minn(psi, 0, r, axis, mode, rng);
    ScanRecord rec = detail::tfim_record(gs.config(), r, "minn", m.value);
    rec.axis = std::string(1, axis_name(axis));
    rec.stderr_ = m.stderr_;
    rec.n_samples = mode.is_enumerate() ? m.n_outcomes : m.n_samples;
    rec.seed = seed;
    out[k] = std::move(rec);
  });
  return out;
}

inline std::vector<ScanRecord> minn_scan(const TfimConfig& cfg, const std::vector<std::size_t>& rs, MeasurementAxis axis, MinnMode mode,
                                         std::uint64_t seed = 0) {
  if (cfg.backend != TfimBackend::ed) throw ArgumentError("MINN needs the ED backend");
  return minn_scan(TfimGroundState(cfg), rs, axis, mode, seed);
}

/// Power-law fit of one measure's records against r.
inline FitResult fit_power_law(const std::vector<ScanRecord>& records, FitWindow window, bool with_offset) {
  std::vector<double> r, y;
  for (const auto& rec : records) {
    r.push_back(static_cast<double>(rec.r));
    y.push_back(rec.value);
  }
  return fit_power_law(std::span<const double>(r), std::span<const double>(y), window, with_offset);
}

}  // namespace nnmagic
