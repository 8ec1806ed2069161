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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sensorank/sensorank.h"
#include "support/test_util.hpp"

namespace {

using sensorank::testing::TempDir;
using sensorank::testing::fixture;

struct Str {
  char* p = nullptr;
  ~Str() { sr_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(sr_version(), SENSORANK_VERSION);
  EXPECT_STREQ(sr_status_name(SR_OK), "Ok");
  EXPECT_STREQ(sr_status_name(SR_CONFIG), "Config");
  EXPECT_STREQ(sr_status_name(SR_ADAPTER_PROTOCOL), "AdapterProtocol");
  EXPECT_NE(sr_status_name(static_cast<sr_status>(1234)), nullptr);
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(sr_embeddings_load(nullptr, nullptr), SR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(sr_last_error()), "");
  double r = 0;
  EXPECT_EQ(sr_pearson(nullptr, nullptr, 3, &r, nullptr), SR_INVALID_ARGUMENT);
  sr_embeddings_free(nullptr);
  sr_oracle_free(nullptr);
  sr_manifest_free(nullptr);
  sr_string_free(nullptr);
}

TEST(CApi, LastErrorClearsOnSuccess) {
  const double x[] = {1, 2, 3};
  double r = 0;
  double p = 0;
  EXPECT_EQ(sr_pearson(x, x, 2, &r, &p), SR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(sr_last_error()), "");
  ASSERT_EQ(sr_pearson(x, x, 3, &r, &p), SR_OK);
  EXPECT_STREQ(sr_last_error(), "");
  EXPECT_NEAR(r, 1.0, 1e-12);
}

TEST(CApi, StatsFunctions) {
  const double x[] = {1, 2, 3, 4, 5, 6};
  const double y[] = {2.1, 3.9, 6.2, 7.8, 10.1, 12.0};
  const double flat[] = {1, 1, 1, 1, 1, 1};
  double r = 0;
  double p = 0;
  ASSERT_EQ(sr_pearson(x, y, 6, &r, &p), SR_OK);
  EXPECT_GT(r, 0.99);
  EXPECT_LT(p, 1e-3);
  EXPECT_EQ(sr_pearson(x, flat, 6, &r, &p), SR_DEGENERATE_VARIANCE);

  double r2 = 0;
  ASSERT_EQ(sr_ols_r2(x, 6, 1, y, &r2), SR_OK);
  EXPECT_NEAR(r2, r * r, 1e-12);
  double loo = 0;
  ASSERT_EQ(sr_loo_cv_r2(x, 6, 1, y, &loo), SR_OK);
  EXPECT_LT(loo, r2);
  std::vector<double> twice(x, x + 6);
  twice.insert(twice.end(), x, x + 6);
  EXPECT_EQ(sr_ols_r2(twice.data(), 6, 2, y, &r2), SR_SINGULAR_DESIGN);

  size_t retained = 0;
  ASSERT_EQ(sr_jackknife(x, y, nullptr, 6, 0.05, &retained), SR_OK);
  EXPECT_EQ(retained, 6u);

  const double seeds[] = {1.0, 3.0};
  double mean = 0;
  double sd = 0;
  double cv = 0;
  double ci = 0;
  ASSERT_EQ(sr_seed_stability(seeds, 2, &mean, &sd, &cv, &ci), SR_OK);
  EXPECT_DOUBLE_EQ(mean, 2.0);
  EXPECT_NEAR(sd, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(ci, 12.7062047362 * std::sqrt(2.0) / std::sqrt(2.0), 1e-6);

  const double z[] = {0, 1, 0, 1, 0, 1};
  ASSERT_EQ(sr_partial_correlation(x, y, z, 6, &r, &p), SR_OK);
  EXPECT_GT(r, 0.9);
}

TEST(CApi, EmbeddingsRoundTripAndGeometry) {
  TempDir dir;
  std::vector<double> v;
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 4; ++j) v.push_back(std::sin(1.0 + i * 4 + j) * (j + 1));
  sr_embeddings* e = nullptr;
  ASSERT_EQ(sr_embeddings_create(v.data(), 40, 4, nullptr, &e), SR_OK);
  const std::string path = (dir / "e.emb").string();
  ASSERT_EQ(sr_embeddings_save(e, path.c_str()), SR_OK);
  sr_embeddings* back = nullptr;
  ASSERT_EQ(sr_embeddings_load(path.c_str(), &back), SR_OK);
  size_t n = 0;
  size_t d = 0;
  ASSERT_EQ(sr_embeddings_shape(back, &n, &d), SR_OK);
  EXPECT_EQ(n, 40u);
  EXPECT_EQ(d, 4u);
  double pr = 0;
  double iso = 0;
  ASSERT_EQ(sr_global_metrics(back, &pr, &iso, nullptr), SR_OK);
  EXPECT_GT(pr, 0.0);
  EXPECT_LE(pr, 1.0);
  EXPECT_GE(iso, 0.0);
  EXPECT_LE(iso, 1.0);
  double l = 0;
  ASSERT_EQ(sr_local_isotropy(back, 8, 20, "variance", 42, &l), SR_OK);
  EXPECT_GE(l, 0.0);
  EXPECT_LE(l, 0.75);
  EXPECT_EQ(sr_local_isotropy(back, 40, 20, "variance", 42, &l), SR_INSUFFICIENT_NEIGHBORS);
  EXPECT_EQ(sr_local_isotropy(back, 8, 20, "nope", 42, &l), SR_INVALID_ARGUMENT);
  sr_embeddings_free(e);
  sr_embeddings_free(back);

  EXPECT_EQ(sr_embeddings_load((dir / "missing.emb").string().c_str(), &back), SR_IO);
}

TEST(CApi, OracleIdentityAndJer) {
  sr_oracle* o = nullptr;
  ASSERT_EQ(sr_oracle_open("builtin:linear", R"({"encoder": {"input_shape": [1, 4, 4], "scale": 2.5}})", &o), SR_OK);
  size_t in = 0;
  size_t out = 0;
  ASSERT_EQ(sr_oracle_dims(o, &in, &out), SR_OK);
  EXPECT_EQ(in, 16u);
  EXPECT_EQ(out, 16u);
  std::vector<double> x(16);
  std::vector<double> dir(16, 0.0);
  for (int i = 0; i < 16; ++i) x[static_cast<size_t>(i)] = i;
  dir[3] = 1.0;
  std::vector<double> y(16);
  ASSERT_EQ(sr_oracle_embed(o, x.data(), 16, y.data(), 16), SR_OK);
  EXPECT_DOUBLE_EQ(y[5], 12.5);
  ASSERT_EQ(sr_oracle_jvp(o, x.data(), dir.data(), 16, y.data(), 16), SR_OK);
  EXPECT_DOUBLE_EQ(y[3], 2.5);
  EXPECT_DOUBLE_EQ(y[4], 0.0);
  EXPECT_EQ(sr_oracle_embed(o, x.data(), 15, y.data(), 16), SR_DIMENSION_MISMATCH);
  double jer = 0;
  EXPECT_EQ(sr_jer_mean(o, 3, 6, 42, &jer), SR_INVALID_ARGUMENT);  // probes are RGB
  sr_oracle_free(o);
  ASSERT_EQ(sr_oracle_open("builtin:linear", R"({"encoder": {"input_shape": [3, 2, 2]}})", &o), SR_OK);
  ASSERT_EQ(sr_jer_mean(o, 3, 6, 42, &jer), SR_OK);
  EXPECT_NEAR(jer, 6.0, 1e-9);
  sr_oracle_free(o);
  EXPECT_EQ(sr_oracle_open("nowhere", nullptr, &o), SR_CONFIG);
}

TEST(CApi, ManifestAndEvaluate) {
  sr_manifest* m = nullptr;
  ASSERT_EQ(sr_manifest_generate("binding", 30, 42, nullptr, &m), SR_OK);
  size_t entries = 0;
  ASSERT_EQ(sr_manifest_size(m, &entries), SR_OK);
  EXPECT_EQ(entries, 30u);
  sr_embeddings* e = nullptr;
  ASSERT_EQ(sr_embeddings_create(std::vector<double>(8, 1.0).data(), 2, 4, nullptr, &e), SR_OK);
  Str json;
  EXPECT_EQ(sr_evaluate(m, e, "cosine", &json.p), SR_MANIFEST_MISMATCH);
  EXPECT_NE(std::string(sr_last_error()).find("b000000_q"), std::string::npos);
  EXPECT_EQ(sr_evaluate(m, e, "telepathy", &json.p), SR_INVALID_ARGUMENT);
  sr_embeddings_free(e);
  sr_manifest_free(m);
  EXPECT_EQ(sr_manifest_generate("triples", 3, 42, nullptr, &m), SR_INVALID_ARGUMENT);
}

TEST(CApi, CommandsThroughJson) {
  TempDir dir;
  Str opts;
  ASSERT_EQ(sr_command_options("metrics", &opts.p), SR_OK);
  const auto arr = nlohmann::json::parse(opts.s());
  bool found = false;
  for (const auto& o : arr)
    if (o["key"] == "local_k") {
      found = true;
      EXPECT_EQ(o["flag"], "--local-k");
      EXPECT_EQ(o["default"], 16);
      EXPECT_EQ(o["label"], "Neighborhood size k");
    }
  EXPECT_TRUE(found);

  const nlohmann::json flags = {{"correlate",
                                 {{"records", fixture("table2.csv").string()}, {"out", (dir / "c").string()}}}};
  Str result;
  ASSERT_EQ(sr_command_run("correlate", nullptr, flags.dump().c_str(), &result.p), SR_OK) << sr_last_error();
  const auto r = nlohmann::json::parse(result.s());
  EXPECT_NEAR(r["pearson"]["r"].get<double>(), 0.654, 0.01);

  Str echo;
  ASSERT_EQ(sr_command_echo("metrics", R"({"metrics": {"local_k": 8}})", nullptr, &echo.p), SR_OK);
  EXPECT_NE(echo.s().find("# Neighborhood size k: 8"), std::string::npos);

  Str bad;
  EXPECT_EQ(sr_command_run("metrics", R"({"metrics": {"bogus": 1}})", nullptr, &bad.p), SR_CONFIG);
  EXPECT_EQ(sr_command_run("metrics", "{not json", nullptr, &bad.p), SR_CONFIG);
  EXPECT_EQ(sr_command_run("metrics", nullptr, nullptr, &bad.p), SR_CONFIG);
  EXPECT_EQ(bad.p, nullptr);

  Str cfg;
  EXPECT_EQ(sr_config_load((dir / "none.toml").string().c_str(), &cfg.p), SR_CONFIG);
  Str fixed;
  ASSERT_EQ(sr_fixed_parameters(&fixed.p), SR_OK);
  EXPECT_NE(fixed.s().find("0.229"), std::string::npos);
}

}  // namespace
