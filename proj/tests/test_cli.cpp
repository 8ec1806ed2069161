// Copyright 2026 the sensorank authors
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

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "support/test_util.hpp"

namespace {

using sensorank::testing::TempDir;
using sensorank::testing::fixture;
using sensorank::testing::slurp;

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SENSORANK_CLI + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

TEST(Cli, HelpListsDefaultsAndFixedParameters) {
  const CliRun r = cli("--help");
  EXPECT_EQ(r.status, 0);
  for (const char* s : {"gen-probes", "correlate", "--local-k 16", "Neighborhood size k", "--anchors 500", "--k 32",
                        "--images 100", "--resize 256", "--crop 224", "0.229"})
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  const CliRun sub = cli("metrics --help");
  EXPECT_EQ(sub.status, 0);
  EXPECT_NE(sub.out.find("--formulation"), std::string::npos);
  EXPECT_NE(sub.out.find("default: 16"), std::string::npos);
}

TEST(Cli, Version) {
  const CliRun r = cli("--version");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find(SENSORANK_VERSION), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("").status, 2);
  EXPECT_EQ(cli("frobnicate").status, 2);
  EXPECT_EQ(cli("metrics --no-such-flag").status, 2);
  EXPECT_EQ(cli("metrics").status, 2);
  EXPECT_EQ(cli("metrics --local-k many --embeddings x.emb").status, 2);
  const CliRun missing = cli("metrics --embeddings /nonexistent/e.emb");
  EXPECT_EQ(missing.status, 3);
  EXPECT_NE(missing.out.find("Io"), std::string::npos) << missing.out;
  EXPECT_EQ(cli("metrics --embeddings x.emb", "SENSORANK_SEED=abc").status, 2);
}

TEST(Cli, EndToEndBindingRun) {
  TempDir dir;
  const std::string d = dir.path().string();
  ASSERT_EQ(cli("gen-probes --n 20 --out " + d + "/p").status, 0);
  ASSERT_EQ(cli("embed --manifest " + d + "/p/manifest.json --oracle builtin:bag_joint --out " + d + "/e.emb").status, 0);
  const CliRun ev = cli("eval --manifest " + d + "/p/manifest.json --embeddings " + d + "/e.emb --out " + d + "/ev");
  ASSERT_EQ(ev.status, 0) << ev.out;
  const auto j = nlohmann::json::parse(ev.out);
  EXPECT_EQ(j["n"], 20);
  EXPECT_EQ(j["command"], "eval");
  const CliRun jer = cli("jer --images 2 --k 4 --encoder-widths 16,8 --out " + d + "/j");
  ASSERT_EQ(jer.status, 0) << jer.out;
  EXPECT_EQ(nlohmann::json::parse(jer.out)["output_dim"], 8);
}

TEST(Cli, ConfigFileAndPrecedence) {
  TempDir dir;
  const std::string d = dir.path().string();
  std::ofstream(dir / "run.toml") << "seed = 5\n[gen_probes]\nn = 3\nout = \"" << d << "/p\"\n";
  const CliRun a = cli("gen-probes --config " + d + "/run.toml", "SENSORANK_SEED=9");
  ASSERT_EQ(a.status, 0) << a.out;
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["n"], 3);
  const CliRun b = cli("gen-probes --config " + d + "/run.toml --seed 11 --n 2");
  ASSERT_EQ(b.status, 0) << b.out;
  j = nlohmann::json::parse(b.out);
  EXPECT_EQ(j["seed"], 11);
  EXPECT_EQ(j["n"], 2);
  EXPECT_NE(slurp(dir / "p/resolved_config.toml").find("# Seed: 11"), std::string::npos);

  std::ofstream(dir / "bad.toml") << "[gen_probes]\nn = 3\nn = 4\n";
  const CliRun bad = cli("gen-probes --config " + d + "/bad.toml");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.out.find("bad.toml:3"), std::string::npos) << bad.out;
}

TEST(Cli, CorrelateFixture) {
  TempDir dir;
  const CliRun r = cli("correlate --records " + fixture("table2.csv").string() + " --dims " + fixture("dims.csv").string() +
                    " --control embed_dim --jackknife --out " + dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["pearson"]["r"].get<double>(), 0.654, 0.01);
  EXPECT_NEAR(j["partial"]["r"].get<double>(), 0.47, 0.03);
}

}  // namespace
