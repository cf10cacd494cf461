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

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"

namespace cli = nnmagic::cli;

namespace {

cli::json manifest(const std::string& sub, const cli::Globals& g, const std::string& config, const std::string& start, const cli::OutputSet& out,
              int code) {
  return {{"subcommand", sub},
          {"version", nnmagic::kVersion},
          {"seed", g.seed},
          {"threads", nnmagic::num_threads()},
          {"started_utc", start},
          {"finished_utc", cli::utc_timestamp()},
          {"exit_code", code},
          {"config", config},
          {"files", out.files()}};
}

bool bare_toml(const std::string& v) {
  if (v == "true" || v == "false") return true;
  char* end = nullptr;
  std::strtod(v.c_str(), &end);
  return !v.empty() && *end == '\0';
}

std::string toml_value(std::vector<std::string> vals, bool array) {
  auto one = [](const std::string& v) { return bare_toml(v) ? v : "\"" + v + "\""; };
  if (!array) return vals.empty() ? "\"\"" : one(vals.front());
  std::string s = "[";
  for (std::size_t k = 0; k < vals.size(); ++k) s += (k ? ", " : "") + one(vals[k]);
  return s + "]";
}

/// Resolved option values of one app level, one `key=value` line each.
std::string resolved_options(const CLI::App& app) {
  std::ostringstream os;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "version" || name == "config") continue;
    std::vector<std::string> vals = opt->results();
    if (opt->get_expected_max() == 0) {
      vals = {opt->count() > 0 && opt->as<bool>() ? "true" : "false"};
    } else if (opt->count() == 0) {
      std::string d = opt->get_default_str();
      if (d.size() >= 2 && d.front() == '[' && d.back() == ']') d = d.substr(1, d.size() - 2);
      vals.clear();
      if (!d.empty()) vals = CLI::detail::split(d, ',');
    }
    if (vals.empty()) continue;
    os << name << '=' << toml_value(vals, opt->get_expected_max() > 1) << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-local magic, stabilizer Renyi entropy and robustness scans"};
  app.set_version_flag("--version", std::string(nnmagic::kVersion));
  app.set_config("--config", "", "TOML file with option values; a resolved copy is written as config.toml")->check(CLI::ExistingFile);
  app.require_subcommand(1);

  cli::Globals g;
  app.add_option("--seed", g.seed, "Master seed for every random stream")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads; 0 uses the hardware count")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--paper-targets", g.paper_targets, "Add published reference values to the JSON summaries");

  cli::Fig1Options f1;
  auto* fig1 = app.add_subcommand("fig1", "Two-qubit pure-state sweep, Haar histogram and Werner family")->configurable();
  fig1->add_option("--theta-points", f1.theta_points)->capture_default_str();
  fig1->add_option("--haar-samples", f1.haar_samples)->capture_default_str();
  fig1->add_option("--bins", f1.bins)->capture_default_str();
  fig1->add_option("--werner-points", f1.werner_points)->capture_default_str();
  fig1->add_option("--starts", f1.starts, "Optimizer starts per Werner point")->capture_default_str();

  cli::TfimOptions tf;
  auto* tfim = app.add_subcommand("tfim", "Ising chain ground-state two-point and MINN scans")->configurable();
  tfim->add_option("-L,--length", tf.L)->capture_default_str();
  tfim->add_option("--field", tf.h, "Transverse fields h")->capture_default_str();
  tfim->add_option("--r-min", tf.r_min)->capture_default_str();
  tfim->add_option("--r-max", tf.r_max, "0 means L/2")->capture_default_str();
  tfim->add_option("--backend", tf.backend)->check(CLI::IsMember({"ed", "free-fermion"}))->capture_default_str();
  tfim->add_option("--minn-axes", tf.axes, "Measurement axes for MINN (x, y, z); needs --backend ed");
  tfim->add_option("--mode", tf.mode, "MINN outcome handling")->check(CLI::IsMember({"enumerate", "sample"}))->capture_default_str();
  tfim->add_option("--samples", tf.samples, "Sampled outcomes per MINN point")->capture_default_str();
  tfim->add_option("--fit-r-min", tf.fit_r_min)->capture_default_str();
  tfim->add_option("--fit-r-max", tf.fit_r_max, "0 means L/4")->capture_default_str();
  tfim->add_option("--fit-offset", tf.fit_offset, "Fit NN and MI with a constant offset")->capture_default_str();

  cli::MhcOptions mh;
  auto* mhc = app.add_subcommand("mhc", "Monitored Haar brick-wall circuits")->configurable();
  mhc->add_option("-L,--length", mh.L)->capture_default_str();
  mhc->add_option("-p,--p", mh.p, "Measurement probability per site and layer")->capture_default_str();
  mhc->add_option("--depth", mh.depth, "Layers; 0 means 4L")->capture_default_str();
  mhc->add_option("--measure-every", mh.measure_every)->capture_default_str();
  mhc->add_option("--n-traj", mh.n_traj, "Trajectories for the averaged NN scan")->capture_default_str();
  mhc->add_option("--n-traj-minn", mh.n_traj_minn, "Trajectories for the MINN scan")->capture_default_str();
  mhc->add_option("--r-min", mh.r_min)->capture_default_str();
  mhc->add_option("--r-max", mh.r_max, "0 means L/2")->capture_default_str();
  mhc->add_option("--starts", mh.starts)->capture_default_str();
  mhc->add_option("--fit-r-min", mh.fit_r_min)->capture_default_str();
  mhc->add_option("--fit-r-max", mh.fit_r_max, "0 means r-max")->capture_default_str();
  mhc->add_option("--observables", mh.observables)->capture_default_str();
  mhc->add_flag("--dump-trajectories", mh.dump);

  cli::RomOptions ro;
  auto* rom = app.add_subcommand("rom", "Robustness of magic and its local-unitary minimum")->configurable();
  rom->add_option("--state", ro.state)->check(CLI::IsMember({"rho0", "t", "bell", "mixed", "phi0-mixed"}))->capture_default_str();
  rom->add_option("--starts", ro.starts)->capture_default_str();

  app.add_subcommand("selfcheck", "Cross-check independent code paths")->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  const std::string start = cli::utc_timestamp();
  nnmagic::set_num_threads(g.threads ? g.threads : std::max(1u, std::thread::hardware_concurrency()));
  const std::string sub = app.get_subcommands().front()->get_name();
  const std::string config = resolved_options(app) + "[" + sub + "]\n" + resolved_options(*app.get_subcommand(sub));

  int code = cli::kOk;
  try {
    cli::OutputSet out(g.out_dir);
    out.write("config.toml", config, false);
    try {
      if (sub == "fig1") code = cli::run_fig1(g, f1, out);
      if (sub == "tfim") code = cli::run_tfim(g, tf, out);
      if (sub == "mhc") code = cli::run_mhc(g, mh, out);
      if (sub == "rom") code = cli::run_rom(g, ro, out);
      if (sub == "selfcheck") code = cli::run_selfcheck(g, out);
    } catch (const cli::UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      code = cli::kUsage;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      code = cli::kUsage;
    } catch (const nnmagic::ResourceError& e) {
      std::cerr << "error: " << e.what() << '\n';
      code = cli::kUsage;
    } catch (const std::exception& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      code = cli::kNumerical;
    }
    out.write_json("manifest.json", manifest(sub, g, config, start, out, code));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
  return code;
}
