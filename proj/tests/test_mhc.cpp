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

#include <catch_amalgamated.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include <cstring>

#include "nnmagic/mhc.hpp"

using namespace nnmagic;
using Catch::Matchers::WithinAbs;

namespace {

CircuitConfig config(std::size_t L, double p, std::uint64_t seed = 1, std::size_t depth = 0) {
  CircuitConfig c;
  c.L = L;
  c.p = p;
  c.seed = seed;
  c.depth = depth;
  return c;
}

bool bit_identical(const StateVector& a, const StateVector& b) {
  return a.dim() == b.dim() && std::memcmp(a.amplitudes().data(), b.amplitudes().data(), a.dim() * sizeof(cplx)) == 0;
}

// Mean entanglement entropy of a Haar state across an m x n cut, m <= n.
double page_entropy(std::size_t m, std::size_t n) {
  double s = 0;
  for (std::size_t k = n + 1; k <= m * n; ++k) s += 1.0 / static_cast<double>(k);
  return s - static_cast<double>(m - 1) / (2.0 * static_cast<double>(n));
}

}  // namespace

TEST_CASE("circuit configuration") {
  CHECK(config(8, 0.1).layers() == 32);
  CHECK(config(8, 0.1, 1, 5).layers() == 5);
  CHECK_THROWS_AS(run_trajectory(config(7, 0.1)), ArgumentError);
  CHECK_THROWS_AS(run_trajectory(config(2, 0.1)), ArgumentError);
  CHECK_THROWS_AS(run_trajectory(config(18, 0.1)), UnsupportedSizeError);
  CHECK_THROWS_AS(run_trajectory(config(8, 1.5)), ArgumentError);
  auto c = config(8, 0.1);
  c.measure_every = 0;
  CHECK_THROWS_AS(run_trajectory(c), ArgumentError);
}

TEST_CASE("trajectories") {
  SECTION("full measurement leaves a basis state") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto [psi, rec] = run_trajectory(config(8, 1.0, seed));
      std::size_t nonzero = 0;
      for (std::size_t s = 0; s < psi.dim(); ++s) nonzero += std::abs(psi[s]) > 1e-12;
      CHECK(nonzero == 1);
      CHECK(rec.outcomes.size() == 8 * 32);
    }
  }
  SECTION("norm is preserved") {
    for (std::size_t t = 0; t < 5; ++t) {
      const auto [psi, rec] = run_trajectory(config(10, 0.17, 3), t);
      CHECK_THAT(psi.amplitudes().norm(), WithinAbs(1.0, 1e-8));
    }
  }
  SECTION("same seed reproduces the trajectory bit for bit") {
    const auto a = run_trajectory(config(10, 0.17, 5), 3);
    const auto b = run_trajectory(config(10, 0.17, 5), 3);
    CHECK(a.second == b.second);
    CHECK(bit_identical(a.first, b.first));
    const auto c = run_trajectory(config(10, 0.17, 5), 4);
    CHECK(!bit_identical(a.first, c.first));
  }
  SECTION("replay from the outcome log is bit exact") {
    for (std::size_t t = 0; t < 4; ++t) {
      const auto cfg = config(10, 0.3, 8);
      const auto [psi, rec] = run_trajectory(cfg, t);
      CHECK(bit_identical(replay(cfg, rec), psi));
    }
    auto c = config(6, 0.5, 2);
    c.measure_every = 2;
    const auto [psi, rec] = run_trajectory(c, 0);
    for (const auto& e : rec.outcomes) CHECK((e.layer % 2 == 1 || e.layer + 1 == c.layers()));
    CHECK(bit_identical(replay(c, rec), psi));
  }
  SECTION("replay rejects a foreign log") {
    const auto cfg = config(6, 0.5, 2);
    auto rec = run_trajectory(cfg, 0).second;
    rec.outcomes.push_back({1000, 0, 0});
    CHECK_THROWS_AS(replay(cfg, rec), ArgumentError);
  }
}

TEST_CASE("unmeasured circuits approach the Page entropy") {
  constexpr std::size_t L = 8, n_traj = 100;
  double sum = 0, sum2 = 0, early = 0;
  for (std::size_t t = 0; t < n_traj; ++t) {
    const double s = bipartite_entropy(run_trajectory(config(L, 0.0, 11), t).first, L / 2);
    sum += s;
    sum2 += s * s;
    early += bipartite_entropy(run_trajectory(config(L, 0.0, 11, 1), t).first, L / 2);
  }
  const double mean = sum / n_traj;
  const double se = std::sqrt((sum2 / n_traj - mean * mean) / (n_traj - 1));
  const double page = page_entropy(16, 16);
  INFO("mean " << mean << " +- " << se << ", Page " << page);
  CHECK(std::abs(mean - page) < 3 * se + 0.02);
  CHECK(early / n_traj < mean - 1.0);
}

TEST_CASE("measurement outcomes follow the Born rule") {
  constexpr std::size_t L = 4, n_traj = 10000, n_out = 16;
  const auto cfg = config(L, 1.0, 21, 1);
  std::vector<double> expected(n_out, 0.0), observed(n_out, 0.0);
  for (std::size_t t = 0; t < n_traj; ++t) {
    CVector amps = StateVector::basis(L, 0).amplitudes();
    detail::apply_layer(amps, cfg, t, 0);
    for (std::size_t o = 0; o < n_out; ++o) expected[o] += std::norm(amps(static_cast<Eigen::Index>(o)));
    const auto rec = run_trajectory(cfg, t).second;
    REQUIRE(rec.outcomes.size() == L);
    std::size_t o = 0;
    for (const auto& e : rec.outcomes) o |= static_cast<std::size_t>(e.outcome) << bit_position(e.site, L);
    observed[o] += 1;
  }
  double chi2 = 0;
  for (std::size_t o = 0; o < n_out; ++o) chi2 += (observed[o] - expected[o]) * (observed[o] - expected[o]) / expected[o];
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(n_out - 1), chi2));
  INFO("chi2 = " << chi2 << ", p = " << p);
  CHECK(p > 0.01);
}

TEST_CASE("averaged NN scan") {
  const std::vector<std::size_t> rs{1, 2, 3, 4};
  SECTION("fully measured circuits carry no NN") {
    for (const auto& rec : averaged_nn_scan(config(8, 1.0), rs, 6)) CHECK_THAT(rec.value, WithinAbs(0.0, 1e-9));
  }
  SECTION("NN never exceeds the SRE") {
    const auto s = averaged_nn_samples(config(8, 0.17), rs, 10);
    REQUIRE(s.values.at("nn").size() == 10);
    for (std::size_t t = 0; t < 10; ++t)
      for (std::size_t k = 0; k < rs.size(); ++k) {
        CHECK(s.values.at("nn")[t][k] >= 0.0);
        CHECK(s.values.at("nn")[t][k] <= s.values.at("sre2")[t][k] + 1e-12);
      }
  }
  SECTION("summary columns") {
    const auto recs = averaged_nn_scan(config(8, 0.17, 4), {2}, 5);
    REQUIRE(recs.size() == 3);
    for (const auto& r : recs) {
      CHECK(r.backend == "statevector");
      CHECK(*r.n_traj == 5);
      CHECK(*r.n_failed == 0);
      CHECK(*r.depth == 32);
      CHECK(*r.p == 0.17);
      CHECK(r.n_samples == 5);
    }
  }
  SECTION("thirty starts match a hundred") {
    std::size_t checked = 0;
    for (std::size_t t = 0; checked < 20; ++t) {
      const auto psi = run_trajectory(config(10, 0.17, 6), t).first;
      for (std::size_t r : {1u, 3u}) {
        const DensityMatrix rho = partial_trace(psi, {0, r});
        OptimizerConfig hundred;
        hundred.seed = t;
        CHECK_THAT(nn_optimize(rho, circuit_optimizer_config()).value, WithinAbs(nn_optimize(rho, hundred).value, 1e-4));
        ++checked;
      }
    }
  }
  SECTION("trajectory dump") {
    std::vector<TrajectoryRecord> dump;
    averaged_nn_scan(config(6, 0.2), {1, 2}, 3, circuit_optimizer_config(), &dump);
    REQUIRE(dump.size() == 3);
    CHECK(dump[2].trajectory == 2);
    CHECK(dump[0].observables.at("nn").size() == 2);
  }
}

TEST_CASE("MINN in circuits") {
  const std::vector<std::size_t> rs{1, 2, 3, 4};
  SECTION("fully measured circuits") {
    for (const auto& rec : minn_scan_mhc(config(8, 1.0), rs, 5))
      if (rec.measure_name != "mutual_information") CHECK_THAT(rec.value, WithinAbs(0.0, 1e-12));
  }
  SECTION("post-measurement SRE bounds MINN") {
    const auto s = minn_samples(config(10, 0.17), rs, 20);
    for (std::size_t t = 0; t < 20; ++t)
      for (std::size_t k = 0; k < rs.size(); ++k) {
        CHECK(s.values.at("minn")[t][k] >= 0.0);
        CHECK(s.values.at("minn")[t][k] <= s.values.at("sre2_post")[t][k] + 1e-12);
      }
  }
  SECTION("sampled outcomes beyond the enumeration cap") {
    const auto s = minn_samples(config(14, 0.17, 2, 8), {1, 7}, 2);
    CHECK(s.values.at("minn").size() == 2);
    CHECK(s.values.at("minn")[0][0] >= 0.0);
  }
  SECTION("thread count does not change results") {
    const std::size_t saved = num_threads();
    set_num_threads(1);
    const auto a = minn_scan_mhc(config(8, 0.17, 3), rs, 6);
    set_num_threads(4);
    const auto b = minn_scan_mhc(config(8, 0.17, 3), rs, 6);
    set_num_threads(saved);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].value == b[k].value);
  }
}

TEST_CASE("swapping diagnostic") {
  const std::vector<std::size_t> rs{1, 2, 3, 4, 5, 6, 8, 10};
  auto curve = [&](double alpha) {
    std::vector<double> y;
    for (std::size_t r : rs) y.push_back(std::pow(static_cast<double>(r), -alpha));
    return std::vector<std::vector<double>>{y};
  };
  SECTION("reference exponents") {
    const auto rep = swapping_diagnostic(rs, curve(0.76), curve(3.31));
    REQUIRE(rep.conclusive);
    CHECK_THAT(rep.minn_fit.alpha, WithinAbs(0.76, 1e-9));
    CHECK_THAT(rep.ie_fit.alpha, WithinAbs(3.31, 1e-9));
    CHECK(rep.swapping);
    CHECK(rep.ordered_2sigma);
    CHECK(SwappingReport::reference_alpha_minn == 0.76);
    CHECK(SwappingReport::reference_alpha_ie == 3.31);
  }
  SECTION("equal exponents") {
    const auto rep = swapping_diagnostic(rs, curve(1.0), curve(1.0));
    REQUIRE(rep.conclusive);
    CHECK(!rep.swapping);
    CHECK(!rep.swapping_significant);
  }
  SECTION("unfittable data") {
    auto bad = curve(1.0);
    bad[0][2] = -1.0;
    const auto rep = swapping_diagnostic(rs, bad, curve(2.0));
    CHECK(!rep.conclusive);
    CHECK(rep.note.starts_with("inconclusive"));
  }
  SECTION("noisy trajectories give finite uncertainties") {
    Rng rng = derive_rng(2);
    std::normal_distribution<double> noise(1.0, 0.05);
    std::vector<std::vector<double>> a, b;
    for (int t = 0; t < 50; ++t) {
      std::vector<double> ya, yb;
      for (std::size_t r : rs) {
        ya.push_back(std::pow(static_cast<double>(r), -0.5) * noise(rng));
        yb.push_back(std::pow(static_cast<double>(r), -2.0) * noise(rng));
      }
      a.push_back(ya);
      b.push_back(yb);
    }
    const auto rep = swapping_diagnostic(rs, a, b);
    CHECK(rep.alpha_minn_stderr > 0.0);
    CHECK(rep.alpha_minn_stderr < 0.05);
    CHECK(rep.ordered_2sigma);
    CHECK(rep.swapping_significant);
  }
  SECTION("trend helper") {
    const auto t = trend_in_r(rs, curve(-1.0));
    CHECK_THAT(t.slope, WithinAbs(1.0, 1e-12));
    CHECK(t.stderr_ == 0.0);
  }
}
