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

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "cli_support.hpp"
#include "nnmagic.hpp"

namespace nnmagic::cli {

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out_dir = "nnmagic_out";
  bool paper_targets = false;
};

struct Fig1Options {
  std::size_t theta_points = 201;
  std::size_t haar_samples = 100000;
  std::size_t bins = 20;
  std::size_t werner_points = 21;
  std::size_t starts = 100;
};

struct TfimOptions {
  std::size_t L = 128;
  std::vector<double> h{1.0};
  std::size_t r_min = 1;
  std::size_t r_max = 0;
  std::string backend = "free-fermion";
  std::vector<std::string> axes;
  std::string mode = "enumerate";
  std::size_t samples = 10000;
  std::size_t fit_r_min = 4;
  std::size_t fit_r_max = 0;
  bool fit_offset = true;
};

struct MhcOptions {
  std::size_t L = 12;
  double p = 0.17;
  std::size_t depth = 0;
  std::size_t measure_every = 1;
  std::size_t n_traj = 500;
  std::size_t n_traj_minn = 5000;
  std::size_t r_min = 1;
  std::size_t r_max = 0;
  std::size_t starts = 30;
  std::size_t fit_r_min = 1;
  std::size_t fit_r_max = 0;
  std::vector<std::string> observables{"nn", "minn"};
  bool dump = false;
};

struct RomOptions {
  std::string state = "rho0";
  std::size_t starts = 200;
};

namespace detail {

inline std::vector<std::size_t> separations(std::size_t lo, std::size_t hi) {
  if (lo < 1 || hi < lo) throw UsageError("separation range must satisfy 1 <= r-min <= r-max");
  std::vector<std::size_t> rs;
  for (std::size_t r = lo; r <= hi; ++r) rs.push_back(r);
  return rs;
}

inline json fit_json(const FitResult& f) {
  return {{"amplitude", f.amplitude}, {"alpha", f.alpha},       {"alpha_stderr", f.alpha_stderr},
          {"offset", f.offset},       {"residual", f.residual}, {"n_points", f.n_points},
          {"window", {f.window.r_min, f.window.r_max}}};
}

inline json try_fit(const std::vector<ScanRecord>& recs, FitWindow w, bool offset) {
  try {
    return fit_json(fit_power_law(recs, w, offset));
  } catch (const FitError& e) {
    return {{"error", e.what()}};
  }
}

inline std::string csv(const std::vector<ScanRecord>& recs, bool circuit = false) {
  std::ostringstream os;
  write_scan_csv(os, recs, circuit);
  return os.str();
}

inline StateVector schmidt_state(double theta) {
  CVector v = CVector::Zero(4);
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  return StateVector(v);
}

inline DensityMatrix werner(double x) {
  CVector singlet = CVector::Zero(4);
  singlet(1) = 1;
  singlet(2) = -1;
  return mix(x, DensityMatrix::from_pure(StateVector(singlet)), DensityMatrix::maximally_mixed(2));
}

inline CMatrix t_on_first() { return kron(gates::T(), gates::I()); }

}  // namespace detail

inline int run_fig1(const Globals& g, const Fig1Options& o, OutputSet& out) {
  if (o.theta_points < 2 || o.werner_points < 2 || o.bins < 1 || o.haar_samples < 2) throw UsageError("fig1 sweep sizes are too small");
  const double pi = std::numbers::pi;
  {
    std::ostringstream os;
    os << "theta,nn,entropy,mutual_sre,sre2,sre2_t_gate,nn_t_gate\n";
    for (std::size_t k = 0; k < o.theta_points; ++k) {
      const double theta = 0.5 * pi * static_cast<double>(k) / static_cast<double>(o.theta_points - 1);
      const StateVector psi = detail::schmidt_state(theta);
      const StateVector moved = apply_gate(psi, gates::T(), {0});
      os << format_number(theta) << ',' << format_number(nn_two_qubit_pure_analytic(psi)) << ',' << format_number(bipartite_entropy(psi, 1))
         << ',' << format_number(mutual_sre(psi)) << ',' << format_number(sre2_pure(psi)) << ',' << format_number(sre2_pure(moved)) << ','
         << format_number(nn_two_qubit_pure_analytic(moved)) << '\n';
    }
    out.write("fig1b.csv", os.str());
  }
  {
    Rng rng = derive_rng(g.seed, {1});
    const double top = max_two_qubit_nn();
    std::vector<std::size_t> counts(o.bins, 0);
    double sum = 0, sum2 = 0;
    for (std::size_t s = 0; s < o.haar_samples; ++s) {
      const double y = nn_two_qubit_pure_analytic(haar_random_state(2, rng));
      sum += y;
      sum2 += y * y;
      counts[std::min(o.bins - 1, static_cast<std::size_t>(y / top * static_cast<double>(o.bins)))]++;
    }
    std::ostringstream os;
    os << "bin_lo,bin_hi,count,density,analytic_probability\n";
    const double width = top / static_cast<double>(o.bins);
    for (std::size_t b = 0; b < o.bins; ++b) {
      const double lo = width * static_cast<double>(b), hi = lo + width;
      os << format_number(lo) << ',' << format_number(hi) << ',' << counts[b] << ','
         << format_number(static_cast<double>(counts[b]) / (static_cast<double>(o.haar_samples) * width)) << ','
         << format_number(haar_nn_probability(lo, hi)) << '\n';
    }
    out.write("fig1c.csv", os.str());
    const double n = static_cast<double>(o.haar_samples);
    const double mean = sum / n;
    json summary = {{"n_samples", o.haar_samples},
                    {"mean_nn", mean},
                    {"stderr", std::sqrt((sum2 / n - mean * mean) / (n - 1))},
                    {"analytic_mean_nn", haar_nn_mean()},
                    {"max_nn", top}};
    if (g.paper_targets) summary["reference_values"] = {{"mean_nn", 0.1917}, {"max_nn", std::log(4.0 / 3.0)}};
    out.write_json("fig1c_summary.json", summary);
  }
  {
    OptimizerConfig cfg;
    cfg.n_starts = o.starts;
    cfg.seed = g.seed;
    std::ostringstream os;
    os << "x,nn,log_negativity,sre2,mutual_sre,sre2_t_gate\n";
    for (std::size_t k = 0; k < o.werner_points; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(o.werner_points - 1);
      const DensityMatrix rho = detail::werner(x);
      os << format_number(x) << ',' << format_number(nn_optimize(rho, cfg).value) << ',' << format_number(log_negativity(rho)) << ','
         << format_number(sre2_mixed(rho)) << ',' << format_number(mutual_sre(rho)) << ','
         << format_number(sre2_mixed(conjugate(rho, detail::t_on_first()))) << '\n';
    }
    out.write("fig1d.csv", os.str());
  }
  return kOk;
}

inline TfimBackend parse_backend(const std::string& s) {
  if (s == "ed") return TfimBackend::ed;
  if (s == "free-fermion") return TfimBackend::free_fermion;
  throw UsageError("backend must be 'ed' or 'free-fermion'");
}

inline int run_tfim(const Globals& g, const TfimOptions& o, OutputSet& out) {
  const TfimBackend backend = parse_backend(o.backend);
  if (o.mode != "enumerate" && o.mode != "sample") throw UsageError("mode must be 'enumerate' or 'sample'");
  if (backend == TfimBackend::ed && o.L > kMaxEdLength) throw UsageError("ED is capped at L = 16; use --backend free-fermion");
  if (!o.axes.empty() && backend != TfimBackend::ed) throw UsageError("MINN needs a pure global state; use --backend ed");
  if (!o.axes.empty() && o.mode == "enumerate" && o.L > kMaxEnumerateLength)
    throw UsageError("outcome enumeration is capped at L = 14; use --mode sample");
  std::vector<MeasurementAxis> axes;
  for (const auto& a : o.axes) {
    if (a.size() != 1) throw UsageError("axis must be one of x, y, z");
    try {
      axes.push_back(parse_axis(a[0]));
    } catch (const ArgumentError&) {
      throw UsageError("axis must be one of x, y, z");
    }
  }
  const std::size_t r_max = o.r_max ? o.r_max : o.L / 2;
  if (r_max >= o.L) throw UsageError("r-max must be below L");
  const auto rs = detail::separations(o.r_min, r_max);
  std::size_t fit_hi = o.fit_r_max ? o.fit_r_max : o.L / 4;
  if (!o.fit_r_max && fit_hi < o.fit_r_min + 3) fit_hi = r_max;
  const FitWindow window{static_cast<double>(o.fit_r_min), static_cast<double>(fit_hi)};
  const MinnMode mode = o.mode == "enumerate" ? MinnMode::enumerate() : MinnMode::sample(o.samples);

  std::vector<ScanRecord> two_point, minn_records;
  json fits = json::array();
  int code = kOk;
  for (double h : o.h) {
    const TfimConfig cfg{o.L, h, backend};
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    json entry = {{"h", h}};
    try {
      const TfimGroundState gs(cfg);
      auto nn = two_point_nn_scan(gs, rs);
      auto cor = correlator_scan(gs, rs);
      entry["energy"] = gs.energy();
      entry["nn"] = detail::try_fit(select_measure(nn, "nn"), window, o.fit_offset);
      entry["mutual_information"] = detail::try_fit(select_measure(nn, "mutual_information"), window, o.fit_offset);
      entry["xx"] = detail::try_fit(select_measure(cor, "xx"), window, false);
      bool warned = false;
      for (const auto& rec : cor) warned = warned || rec.precision_warning;
      entry["precision_warning"] = warned;
      for (auto* v : {&nn, &cor})
        for (auto& rec : *v) rec.seed = g.seed;
      two_point.insert(two_point.end(), nn.begin(), nn.end());
      two_point.insert(two_point.end(), cor.begin(), cor.end());
      for (auto axis : axes) {
        auto m = minn_scan(gs, rs, axis, mode, g.seed);
        entry[std::string("minn_") + axis_name(axis)] = detail::try_fit(m, window, false);
        minn_records.insert(minn_records.end(), m.begin(), m.end());
      }
    } catch (const std::exception& e) {
      if (dynamic_cast<const std::invalid_argument*>(&e)) throw;
      entry["error"] = e.what();
      code = kNumerical;
    }
    fits.push_back(entry);
  }
  out.write("tfim_two_point.csv", detail::csv(two_point));
  if (!axes.empty()) out.write("tfim_minn.csv", detail::csv(minn_records));
  json summary = {{"L", o.L}, {"backend", o.backend}, {"fit_window", {window.r_min, window.r_max}}, {"fits", fits}};
  if (g.paper_targets) summary["reference_values"] = {{"two_point_nn_exponent_h1", 0.5}, {"xx_exponent_h1", 0.25}};
  out.write_json("tfim_fits.json", summary);
  return code;
}

inline json trajectory_json(const TrajectoryRecord& rec, const std::string& set) {
  json outcomes = json::array();
  for (const auto& e : rec.outcomes) outcomes.push_back({e.layer, e.site, e.outcome});
  return {{"scan", set}, {"seed", rec.seed}, {"trajectory", rec.trajectory}, {"outcomes", outcomes}, {"observables", rec.observables}};
}

inline int run_mhc(const Globals& g, const MhcOptions& o, OutputSet& out) {
  CircuitConfig cfg;
  cfg.L = o.L;
  cfg.p = o.p;
  cfg.depth = o.depth;
  cfg.seed = g.seed;
  cfg.measure_every = o.measure_every;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + "; statevector circuits support even L in [4, 16]");
  }
  const std::size_t r_max = o.r_max ? o.r_max : o.L / 2;
  if (r_max >= o.L) throw UsageError("r-max must be below L");
  const auto rs = detail::separations(o.r_min, r_max);
  bool want_nn = false, want_minn = false;
  for (const auto& s : o.observables) {
    if (s == "nn")
      want_nn = true;
    else if (s == "minn")
      want_minn = true;
    else
      throw UsageError("observables must be drawn from nn, minn");
  }
  int code = kOk;
  std::ostringstream dump_text;
  if (want_nn) {
    OptimizerConfig opt = circuit_optimizer_config();
    opt.n_starts = o.starts;
    std::vector<TrajectoryRecord> dump;
    const auto samples = averaged_nn_samples(cfg, rs, o.n_traj, opt, o.dump ? &dump : nullptr);
    out.write("mhc_nn.csv", detail::csv(summarize(samples, cfg), true));
    if (samples.n_failed) code = kNumerical;
    for (const auto& rec : dump) dump_text << trajectory_json(rec, "nn").dump() << '\n';
  }
  if (want_minn) {
    std::vector<TrajectoryRecord> dump;
    const auto samples = minn_samples(cfg, rs, o.n_traj_minn, o.dump ? &dump : nullptr);
    out.write("mhc_minn.csv", detail::csv(summarize(samples, cfg), true));
    if (samples.n_failed) code = kNumerical;
    for (const auto& rec : dump) dump_text << trajectory_json(rec, "minn").dump() << '\n';

    SwappingOptions sopt;
    sopt.window = {static_cast<double>(o.fit_r_min), static_cast<double>(o.fit_r_max ? o.fit_r_max : r_max)};
    sopt.seed = g.seed;
    const auto rep = swapping_diagnostic(samples, sopt);
    json j = {{"conclusive", rep.conclusive},
              {"note", rep.note},
              {"alpha_minn", rep.minn_fit.alpha},
              {"alpha_minn_stderr", rep.alpha_minn_stderr},
              {"alpha_ie", rep.ie_fit.alpha},
              {"alpha_ie_stderr", rep.alpha_ie_stderr},
              {"ratio", rep.ratio},
              {"swapping", rep.swapping},
              {"swapping_significant", rep.swapping_significant},
              {"ordered_2sigma", rep.ordered_2sigma},
              {"target_alpha_minn", SwappingReport::reference_alpha_minn},
              {"target_alpha_ie", SwappingReport::reference_alpha_ie}};
    if (rep.conclusive) {
      j["minn_fit"] = detail::fit_json(rep.minn_fit);
      j["ie_fit"] = detail::fit_json(rep.ie_fit);
    }
    if (!samples.values.empty()) {
      const auto gap = trend_in_r(rs, row_difference(samples.values.at("sre2_post"), samples.values.at("minn")), 200, g.seed);
      j["post_gap_trend"] = {{"slope", gap.slope}, {"stderr", gap.stderr_}};
    }
    out.write_json("mhc_swapping.json", j);
  }
  if (o.dump) out.write("mhc_trajectories.jsonl", dump_text.str());
  return code;
}

inline DensityMatrix named_state(const std::string& name) {
  const double pi = std::numbers::pi;
  CVector phi0(2);
  phi0 << std::cos(pi / 8), std::sin(pi / 8);
  if (name == "rho0") {
    const StateVector pp = tensor(StateVector(phi0), StateVector(phi0));
    return mix(0.5, DensityMatrix::from_pure(pp), DensityMatrix::from_pure(StateVector::basis(2, 0)));
  }
  if (name == "t") {
    CVector v(2);
    v << 1, std::polar(1.0, pi / 4);
    return DensityMatrix::from_pure(StateVector(v));
  }
  if (name == "bell") return DensityMatrix::from_pure(detail::schmidt_state(pi / 4));
  if (name == "mixed") return DensityMatrix::maximally_mixed(2);
  if (name == "phi0-mixed") return DensityMatrix(kron(DensityMatrix::from_pure(StateVector(phi0)).matrix(), DensityMatrix::maximally_mixed(1).matrix()));
  throw UsageError("state must be one of rho0, t, bell, mixed, phi0-mixed");
}

inline int run_rom(const Globals& g, const RomOptions& o, OutputSet& out) {
  const DensityMatrix rho = named_state(o.state);
  const auto basis = enumerate_stabilizer_states(rho.n_qubits());
  const auto d = solve_l1_lp(pauli_expectations(rho), basis);
  json j = {{"state", o.state},
            {"n_qubits", rho.n_qubits()},
            {"stabilizer_states", basis.size()},
            {"rom", d.rom},
            {"l1_norm", d.l1_norm},
            {"residual", d.residual},
            {"coefficients", std::vector<double>(d.coefficients.data(), d.coefficients.data() + d.coefficients.size())}};
  if (rho.n_qubits() == 2) {
    OptimizerConfig cfg = rom_optimizer_config();
    cfg.n_starts = o.starts;
    cfg.seed = g.seed;
    const NNResult res = nn_rom(rho, cfg);
    json params = json::array();
    for (const auto& e : res.params.angles()) params.push_back({e.theta, e.phi, e.lambda});
    j["nn_rom"] = {{"value", res.value}, {"best_start", res.best_start}, {"n_starts", cfg.n_starts}, {"euler_angles", params}};
  }
  if (g.paper_targets) j["reference_values"] = {{"nn_rom_rho0", 0.0703}};
  out.write_json("rom.json", j);
  return kOk;
}

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<CheckOutcome> selfcheck_suite(std::uint64_t seed) {
  std::vector<CheckOutcome> checks;
  auto guarded = [&](const std::string& name, auto&& body) {
    CheckOutcome c{name, false, ""};
    try {
      body(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    checks.push_back(c);
  };
  guarded("optimizer_vs_theorem", [&](CheckOutcome& c) {
    Rng rng = derive_rng(seed, {10});
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
      const StateVector psi = haar_random_state(2, rng);
      OptimizerConfig cfg;
      cfg.seed = seed + static_cast<std::uint64_t>(k);
      worst = std::max(worst, std::abs(nn_optimize(psi, cfg).value - nn_two_qubit_pure_analytic(psi)));
    }
    c.pass = worst < 1e-5;
    c.detail = "max deviation " + format_number(worst);
  });
  guarded("ed_vs_free_fermion", [&](CheckOutcome& c) {
    double worst = 0;
    for (double h : {0.5, 1.0, 1.5}) {
      const TfimGroundState ed({10, h, TfimBackend::ed});
      const FreeFermionChain ff(10, h);
      for (std::size_t r = 1; r < 10; ++r) {
        const auto a = ed.correlators(r);
        const auto b = ff.correlators(r);
        worst = std::max({worst, std::abs(a.sz - b.sz), std::abs(a.xx - b.xx), std::abs(a.yy - b.yy), std::abs(a.zz - b.zz)});
      }
    }
    c.pass = worst < 1e-6;
    c.detail = "max deviation " + format_number(worst);
  });
  guarded("lp_vs_brute_force", [&](CheckOutcome& c) {
    const auto basis = enumerate_stabilizer_states(1);
    const Eigen::MatrixXd s = basis.matrix();
    Rng rng = derive_rng(seed, {11});
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
      const Eigen::VectorXd target = pauli_expectations(DensityMatrix::from_pure(haar_random_state(1, rng)));
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
          for (int cc = b + 1; cc < 6; ++cc)
            for (int d = cc + 1; d < 6; ++d) {
              Eigen::Matrix4d sub;
              sub << s.col(a), s.col(b), s.col(cc), s.col(d);
              Eigen::FullPivLU<Eigen::Matrix4d> lu(sub);
              if (lu.isInvertible()) best = std::min(best, lu.solve(target).cwiseAbs().sum());
            }
      worst = std::max(worst, std::abs(solve_l1_lp(target, basis).l1_norm - best));
    }
    c.pass = worst < 1e-9;
    c.detail = "max deviation " + format_number(worst);
  });
  guarded("enumerate_vs_sample", [&](CheckOutcome& c) {
    const TfimGroundState gs({10, 1.0, TfimBackend::ed});
    const std::vector<std::size_t> rs{1, 2, 3, 4, 5};
    double worst = 0;
    for (auto axis : {MeasurementAxis::x, MeasurementAxis::y, MeasurementAxis::z}) {
      const auto exact = minn_scan(gs, rs, axis, MinnMode::enumerate());
      const auto mc = minn_scan(gs, rs, axis, MinnMode::sample(10000), seed);
      for (std::size_t k = 0; k < rs.size(); ++k) worst = std::max(worst, std::abs(exact[k].value - mc[k].value) / mc[k].stderr_);
    }
    c.pass = worst < 3.0;
    c.detail = "max deviation " + format_number(worst) + " standard errors";
  });
  return checks;
}

inline int run_selfcheck(const Globals& g, OutputSet& out) {
  const auto checks = selfcheck_suite(g.seed);
  json j = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    j.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    ok = ok && c.pass;
  }
  out.write_json("selfcheck.json", {{"pass", ok}, {"checks", j}});
  return ok ? kOk : kSelfcheckFailed;
}

}  // namespace nnmagic::cli
