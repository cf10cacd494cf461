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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli_support.hpp"

namespace fs = std::filesystem;
using nnmagic::cli::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nnmagic_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

int run(const std::string& args, const fs::path& cwd = fs::temp_directory_path()) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" NNMAGIC_CLI_PATH "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

const std::string kMhc = "mhc -L 6 --n-traj 6 --n-traj-minn 20 --starts 4 --dump-trajectories";
const std::string kTfim = "tfim -L 10 --backend ed --field 0.7 1.3 --minn-axes x y --mode sample --samples 300";

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  const fs::path out = scratch("usage");
  CHECK(run("") == 1);
  CHECK(run("--no-such-flag selfcheck") == 1);
  CHECK(run("--out-dir '" + out.string() + "' tfim -L 20 --backend ed") == 1);
  CHECK(run("--out-dir '" + out.string() + "' tfim -L 16 --backend ed --minn-axes z") == 1);
  CHECK(run("--out-dir '" + out.string() + "' tfim --minn-axes z") == 1);
  CHECK(run("--out-dir '" + out.string() + "' mhc -L 7") == 1);
  CHECK(run("--out-dir '" + out.string() + "' rom --state nope") == 1);
  CHECK(run("--version") == 0);
}

TEST_CASE("selfcheck passes on this build") {
  const fs::path out = scratch("selfcheck");
  REQUIRE(run("--out-dir '" + out.string() + "' selfcheck") == 0);
  const json j = load(out / "selfcheck.json");
  CHECK(j["pass"] == true);
  CHECK(j["checks"].size() == 4);
}

TEST_CASE("manifest records config, seed and file digests") {
  const fs::path out = scratch("manifest");
  REQUIRE(run("--seed 9 --out-dir '" + out.string() + "' fig1 --haar-samples 500 --werner-points 3 --starts 4") == 0);
  const json m = load(out / "manifest.json");
  CHECK(m["subcommand"] == "fig1");
  CHECK(m["seed"] == 9);
  CHECK(m["exit_code"] == 0);
  CHECK(m["config"] == slurp(out / "config.toml"));
  std::set<std::string> names;
  for (const auto& f : m["files"]) {
    const std::string name = f["file"];
    names.insert(name);
    CHECK(f["sha256"] == nnmagic::cli::sha256_hex(slurp(out / name)));
  }
  CHECK(names == std::set<std::string>{"fig1b.csv", "fig1c.csv", "fig1c_summary.json", "fig1d.csv"});
  CHECK_FALSE(load(out / "fig1c_summary.json").contains("reference_values"));
}

TEST_CASE("reference values only with the targets flag") {
  const fs::path out = scratch("targets");
  REQUIRE(run("--paper-targets --out-dir '" + out.string() + "' rom --state t") == 0);
  const json j = load(out / "rom.json");
  CHECK(j.contains("reference_values"));
  CHECK(std::abs(j["rom"].get<double>() - (std::sqrt(2.0) - 1)) < 1e-9);
}

TEST_CASE("nothing is written outside the output directory") {
  const fs::path cwd = scratch("cwd");
  fs::create_directories(cwd);
  REQUIRE(run("--out-dir out fig1 --haar-samples 100 --werner-points 2 --starts 2", cwd) == 0);
  std::vector<std::string> entries;
  for (const auto& e : fs::directory_iterator(cwd)) entries.push_back(e.path().filename().string());
  CHECK(entries == std::vector<std::string>{"out"});
}

TEST_CASE("reruns are byte-identical") {
  for (const std::string& args : {kTfim, std::string("tfim -L 32 --field 1 2"), kMhc}) {
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b"), c = scratch("rerun_c"), d = scratch("rerun_d");
    REQUIRE(run("--seed 5 --threads 1 --out-dir '" + a.string() + "' " + args) == 0);
    REQUIRE(run("--seed 5 --threads 3 --out-dir '" + b.string() + "' " + args) == 0);
    const std::string sub = args.substr(0, args.find(' '));
    REQUIRE(run("--config '" + (a / "config.toml").string() + "' --out-dir '" + c.string() + "' " + sub) == 0);
    REQUIRE(run("--seed 6 --out-dir '" + d.string() + "' " + args) == 0);

    const json files = load(a / "manifest.json")["files"];
    REQUIRE(files.size() >= 2);
    bool seed_matters = false;
    for (const auto& f : files) {
      const std::string name = f["file"];
      INFO(args << " -> " << name);
      CHECK(slurp(a / name) == slurp(b / name));
      CHECK(slurp(a / name) == slurp(c / name));
      seed_matters = seed_matters || slurp(a / name) != slurp(d / name);
    }
    CHECK(seed_matters);
  }
}
