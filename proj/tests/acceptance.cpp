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

// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <boost/math/distributions/chi_squared.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "nnmagic.hpp"

using namespace nnmagic;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

StateVector schmidt(double theta) {
  CVector v = CVector::Zero(4);
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  return StateVector(v);
}

DensityMatrix werner(double x) {
  CVector singlet = CVector::Zero(4);
  singlet(1) = 1 / std::sqrt(2.0);
  singlet(2) = -1 / std::sqrt(2.0);
  return mix(x, DensityMatrix::from_pure(StateVector(singlet)), DensityMatrix::maximally_mixed(2));
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> rs;
  for (std::size_t r = lo; r <= hi; ++r) rs.push_back(r);
  return rs;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double stderr_of(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t k) {
  std::vector<double> c;
  for (const auto& row : rows) c.push_back(row[k]);
  return c;
}

// Residual sum of squares of a straight-line fit.
double line_rss(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  const double b = sxy / sxx;
  double rss = 0;
  for (std::size_t k = 0; k < x.size(); ++k) rss += std::pow(y[k] - my - b * (x[k] - mx), 2);
  return rss;
}

double brute_force_l1(const Eigen::VectorXd& target, const Eigen::MatrixXd& s) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(s.cols());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Eigen::Matrix4d sub;
          sub << s.col(a), s.col(b), s.col(c), s.col(d);
          Eigen::FullPivLU<Eigen::Matrix4d> lu(sub);
          if (lu.isInvertible()) best = std::min(best, lu.solve(target).cwiseAbs().sum());
        }
  return best;
}

Verdict theorem_equivalence() {
  Rng rng = derive_rng(2001);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const StateVector psi = haar_random_state(2, rng);
    Eigen::Matrix2cd m;
    m << psi[0], psi[1], psi[2], psi[3];
    const double theta = std::acos(std::min(1.0, Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues()(0)));
    OptimizerConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(k);
    worst = std::max(worst, std::abs(nn_optimize(psi, cfg).value - nn_from_schmidt_angle(theta)));
  }
  return {worst < 1e-5, "max |optimizer - closed form| = " + num(worst)};
}

Verdict maximum_nn() {
  const std::size_t n = 10000;
  double best = -1, arg = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double theta = 0.5 * kPi * static_cast<double>(k) / n;
    const double v = nn_two_qubit_pure_analytic(schmidt(theta));
    if (v > best) best = v, arg = theta;
  }
  const double gap = std::abs(best - std::log(4.0 / 3.0));
  const bool at_pi8 = std::abs(arg - kPi / 8) < 0.5 * kPi / n || std::abs(arg - 3 * kPi / 8) < 0.5 * kPi / n;
  return {gap < 1e-9 && at_pi8, "max = " + num(best, 12) + " at theta = " + num(arg, 8) + ", |max - ln(4/3)| = " + num(gap)};
}

Verdict haar_statistics() {
  const std::size_t samples = 100000, bins = 20;
  const double top = max_two_qubit_nn();
  Rng rng = derive_rng(2003);
  std::vector<double> counts(bins, 0.0);
  double sum = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double y = nn_two_qubit_pure_analytic(haar_random_state(2, rng));
    sum += y;
    counts[std::min(bins - 1, static_cast<std::size_t>(y / top * bins))] += 1;
  }
  double chi2 = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double expected = samples * haar_nn_probability(top * b / bins, top * (b + 1) / bins);
    chi2 += std::pow(counts[b] - expected, 2) / expected;
  }
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), chi2));
  const double m = sum / samples;
  return {std::abs(m - 0.1917) <= 0.002 && p > 0.01, "mean = " + num(m) + ", chi2 = " + num(chi2) + " (p = " + num(p) + ")"};
}

Verdict figure_invariances() {
  OptimizerConfig cfg;
  double zero_worst = 0;
  for (double theta : {0.0, kPi / 4, kPi / 2}) {
    zero_worst = std::max({zero_worst, nn_two_qubit_pure_analytic(schmidt(theta)), nn_optimize(schmidt(theta), cfg).value});
  }
  double t_nn = 0, t_sre = 0;
  for (int k = 1; k < 20; ++k) {
    const StateVector psi = schmidt(0.5 * kPi * k / 20);
    const StateVector moved = apply_gate(psi, gates::T(), {0});
    t_nn = std::max({t_nn, std::abs(nn_two_qubit_pure_analytic(moved) - nn_two_qubit_pure_analytic(psi)),
                     std::abs(nn_optimize(moved, cfg).value - nn_optimize(psi, cfg).value)});
    t_sre = std::max(t_sre, std::abs(sre2_pure(moved) - sre2_pure(psi)));
  }
  const double w02 = nn_optimize(werner(0.2), cfg).value;
  const double en02 = log_negativity(werner(0.2));
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity(), last = 0;
  for (int k = 0; k <= 10; ++k) {
    last = nn_optimize(werner(0.9 + 0.01 * k), cfg).value;
    monotone = monotone && last < prev;
    prev = last;
  }
  const bool pass = zero_worst < 1e-6 && t_nn < 1e-6 && t_sre > 1e-3 && w02 > 1e-3 && std::abs(en02) < 1e-12 && monotone && last < 1e-9;
  return {pass, "NN at theta in {0, pi/4, pi/2} <= " + num(zero_worst) + "; T gate moves NN by " + num(t_nn) + ", SRE by " + num(t_sre) +
                    "; Werner x=0.2 NN = " + num(w02) + ", E_N = " + num(en02) + "; tail monotone = " + (monotone ? "yes" : "no") +
                    ", NN(1) = " + num(last)};
}

Verdict werner_identity() {
  double worst = 0;
  for (int k = 0; k <= 100; ++k) {
    const DensityMatrix rho = werner(0.01 * k);
    worst = std::max(worst, std::abs(sre2_mixed(rho) - mutual_sre(rho)));
  }
  return {worst < 1e-9, "max |SRE - mutual SRE| = " + num(worst)};
}

Verdict tfim_criticality() {
  const TfimGroundState gs({128, 1.0, TfimBackend::free_fermion});
  const auto rs = range(1, 64);
  const FitWindow w{4, 32};
  const auto nn = two_point_nn_scan(gs, rs);
  const auto cor = correlator_scan(gs, rs);
  const FitResult f_nn = fit_power_law(select_measure(nn, "nn"), w, true);
  const FitResult f_xx = fit_power_law(select_measure(cor, "xx"), w, false);
  const double law = exponent_law({{{0.25, 0.0}, {2.0, 0.25}}});
  const double law_measured = exponent_law({{{f_xx.alpha, 0.0}, {2.0, 0.25}}});
  const bool nn_ok = std::abs(f_nn.alpha - 0.5) <= 0.1;
  const bool xx_ok = std::abs(f_xx.alpha - 0.25) <= 0.03;
  return {nn_ok && xx_ok && law == 0.5,
          "NN exponent = " + num(f_nn.alpha) + " (target 0.5 +- 0.1: " + (nn_ok ? "ok" : "outside") + "); xx exponent = " + num(f_xx.alpha) +
              " (" + (xx_ok ? "ok" : "outside") + "); law(1/4, 2) = " + num(law) + ", law(fitted xx, 2) = " + num(law_measured)};
}

Verdict backend_cross_check() {
  double worst = 0;
  for (double h : {0.5, 1.0, 2.0}) {
    const TfimGroundState ed({12, h, TfimBackend::ed});
    const TfimGroundState ff({12, h, TfimBackend::free_fermion});
    for (std::size_t r = 1; r < 12; ++r) {
      const auto a = ed.correlators(r), b = ff.correlators(r);
      worst = std::max({worst, std::abs(a.sz - b.sz), std::abs(a.xx - b.xx), std::abs(a.yy - b.yy), std::abs(a.zz - b.zz)});
      worst = std::max(worst, std::abs(sre2_mixed(ed.two_site(r).rho) - sre2_mixed(ff.two_site(r).rho)));
    }
  }
  return {worst < 1e-6, "max ED/free-fermion deviation over correlators and NN = " + num(worst)};
}

Verdict tfim_off_critical() {
  const auto nn = select_measure(two_point_nn_scan(TfimConfig{64, 2.0, TfimBackend::free_fermion}, range(1, 32)), "nn");
  const FitResult f = fit_power_law(nn, {4, 16}, true);
  return {f.alpha > 3, "offset-subtracted exponent at h=2 = " + num(f.alpha) + " (offset " + num(f.offset) + ")"};
}

Verdict minn_consistency() {
  const TfimGroundState small({10, 1.0, TfimBackend::ed});
  double worst = 0;
  for (auto axis : {MeasurementAxis::x, MeasurementAxis::y, MeasurementAxis::z}) {
    const auto exact = minn_scan(small, range(1, 5), axis, MinnMode::enumerate());
    const auto mc = minn_scan(small, range(1, 5), axis, MinnMode::sample(10000), 2009);
    for (std::size_t k = 0; k < exact.size(); ++k) worst = std::max(worst, std::abs(exact[k].value - mc[k].value) / mc[k].stderr_);
  }
  // Shape at the largest enumerable chain.
  const auto rs = range(1, 7);
  const TfimGroundState crit({14, 1.0, TfimBackend::ed});
  const TfimGroundState gapped({14, 2.0, TfimBackend::ed});
  bool power_law = true, faster = true;
  std::string shape;
  for (auto axis : {MeasurementAxis::x, MeasurementAxis::y, MeasurementAxis::z}) {
    const auto c = minn_scan(crit, rs, axis, MinnMode::enumerate());
    const auto g = minn_scan(gapped, rs, axis, MinnMode::enumerate());
    std::vector<double> lr, r, lc;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      r.push_back(static_cast<double>(rs[k]));
      lr.push_back(std::log(static_cast<double>(rs[k])));
      lc.push_back(std::log(c[k].value));
    }
    const double loglog = line_rss(lr, lc), semilog = line_rss(r, lc);
    const double drop_c = c.back().value / c.front().value, drop_g = g.back().value / g.front().value;
    power_law = power_law && drop_c < 1 && loglog < semilog;
    faster = faster && drop_g < drop_c && drop_g < 1e-2;
    shape += std::string(" ") + axis_name(axis) + ": rss log-log/semi-log " + num(loglog, 3) + "/" + num(semilog, 3) + ", decay h=1 " +
             num(drop_c, 3) + " vs h=2 " + num(drop_g, 3) + ";";
  }
  return {worst < 3 && power_law && faster, "max |enumerate - sample| = " + num(worst, 3) + " sigma;" + shape};
}

Verdict mhc_orderings() {
  CircuitConfig cfg;
  cfg.L = 12;
  cfg.p = 0.17;
  cfg.seed = 2010;
  const auto rs = range(1, 6);
  const auto nn = averaged_nn_samples(cfg, rs, 500, circuit_optimizer_config());
  const auto excess = row_difference(nn.values.at("nn"), nn.values.at("sre2"));
  bool ordered = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const auto col = column(excess, k);
    worst = std::max(worst, mean(col) / std::max(stderr_of(col), 1e-300));
    ordered = ordered && mean(col) <= 2 * stderr_of(col);
  }
  const auto mi = minn_samples(cfg, rs, 2000);
  const auto gap = trend_in_r(rs, row_difference(mi.values.at("sre2_post"), mi.values.at("minn")), 200, cfg.seed);
  const bool increasing = gap.slope > 2 * gap.stderr_;
  SwappingOptions sopt;
  sopt.seed = cfg.seed;
  const auto rep = swapping_diagnostic(mi, sopt);
  return {ordered && increasing && rep.ordered_2sigma && nn.n_failed == 0 && mi.n_failed == 0,
          "NN - SRE max z = " + num(worst, 3) + "; post gap slope = " + num(gap.slope, 3) + " +- " + num(gap.stderr_, 3) + "; alpha_MINN = " +
              num(rep.minn_fit.alpha, 3) + " +- " + num(rep.alpha_minn_stderr, 3) + ", alpha_IE = " + num(rep.ie_fit.alpha, 3) + " +- " +
              num(rep.alpha_ie_stderr, 3)};
}

Verdict robustness() {
  const auto one = enumerate_stabilizer_states(1), two = enumerate_stabilizer_states(2);
  CVector t(2);
  t << 1 / std::sqrt(2.0), std::polar(1 / std::sqrt(2.0), kPi / 4);
  const Eigen::VectorXd target = pauli_expectations(DensityMatrix::from_pure(StateVector(t)));
  const double lp = solve_l1_lp(target, one).rom;
  const double brute = brute_force_l1(target, one.matrix()) - 1;
  CVector phi0(2);
  phi0 << std::cos(kPi / 8), std::sin(kPi / 8);
  const DensityMatrix rho0 =
      mix(0.5, DensityMatrix::from_pure(tensor(StateVector(phi0), StateVector(phi0))), DensityMatrix::from_pure(StateVector::basis(2, 0)));
  const double v = nn_rom(rho0).value;
  const bool pass = one.size() == 6 && two.size() == 60 && std::abs(lp - (std::sqrt(2.0) - 1)) < 1e-6 && std::abs(lp - brute) < 1e-6 &&
                    std::abs(v - 0.0703) <= 0.005;
  return {pass, std::to_string(one.size()) + " and " + std::to_string(two.size()) + " stabilizer states; T-state RoM = " + num(lp, 10) +
                    " (brute force " + num(brute, 10) + "); nn_rom(rho0) = " + num(v)};
}

Verdict sub_additivity() {
  Rng rng = derive_rng(2012);
  OptimizerConfig cfg;
  cfg.n_starts = 10;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 50; ++k) {
    const StateVector psi = haar_random_state(2, rng), phi = haar_random_state(2, rng);
    cfg.seed = static_cast<std::uint64_t>(k);
    const double joint = nn_optimize_nqubit(tensor(psi, phi), {{0, 2}, {1, 3}}, cfg).value;
    worst = std::max(worst, joint - nn_two_qubit_pure_analytic(psi) - nn_two_qubit_pure_analytic(phi));
  }
  return {worst <= 1e-5, "max joint - (sum of parts) = " + num(worst)};
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" NNMAGIC_CLI_PATH "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / ("nnmagic_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::string> runs = {"fig1 --haar-samples 2000 --werner-points 5 --starts 10",
                                         "tfim -L 10 --backend ed --field 0.5 1 --minn-axes x z --mode sample --samples 500",
                                         "tfim -L 64 --field 1 2",
                                         "mhc -L 8 --n-traj 10 --n-traj-minn 50 --starts 5 --dump-trajectories",
                                         "rom --state rho0 --starts 8",
                                         "selfcheck"};
  std::size_t compared = 0;
  std::string failures;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const fs::path a = root / ("a" + std::to_string(k)), b = root / ("b" + std::to_string(k)), c = root / ("c" + std::to_string(k));
    const std::string sub = runs[k].substr(0, runs[k].find(' '));
    const int ca = run_cli("--seed 13 --out-dir '" + a.string() + "' " + runs[k]);
    const int cb = run_cli("--seed 13 --threads 2 --out-dir '" + b.string() + "' " + runs[k]);
    const int cc = run_cli("--config '" + (a / "config.toml").string() + "' --out-dir '" + c.string() + "' " + sub);
    if (ca != 0 || cb != 0 || cc != 0) {
      failures += " " + sub + " exit codes " + std::to_string(ca) + "/" + std::to_string(cb) + "/" + std::to_string(cc) + ";";
      continue;
    }
    const json manifest = json::parse(slurp(a / "manifest.json"));
    for (const auto& f : manifest["files"]) {
      const std::string name = f["file"];
      ++compared;
      if (slurp(a / name) != slurp(b / name) || slurp(a / name) != slurp(c / name)) failures += " " + name + " differs;";
    }
  }
  fs::remove_all(root);
  return {failures.empty() && compared > 0, std::to_string(compared) + " files compared across reruns" + failures};
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, std::string, std::function<Verdict()>, double>> criteria = {
      {1, "theorem equivalence", theorem_equivalence, 120},
      {2, "maximum NN", maximum_nn, 0},
      {3, "Haar statistics", haar_statistics, 60},
      {4, "pure-state and Werner invariances", figure_invariances, 0},
      {5, "Werner identity", werner_identity, 0},
      {6, "TFIM criticality", tfim_criticality, 300},
      {7, "ED vs free-fermion", backend_cross_check, 0},
      {8, "TFIM off-critical decay", tfim_off_critical, 0},
      {9, "MINN consistency", minn_consistency, 0},
      {10, "monitored circuit orderings", mhc_orderings, 7200},
      {11, "robustness of magic", robustness, 600},
      {12, "sub-additivity", sub_additivity, 0},
      {13, "determinism", determinism, 0},
  };
  int failed = 0;
  for (const auto& [id, name, check, budget] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget > 0 && secs > budget) {
      v.pass = false;
      v.detail += "; over the " + num(budget, 4) + " s budget";
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail << " (" << num(secs, 3) << " s)" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
