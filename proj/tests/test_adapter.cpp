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

#include <gtest/gtest.h>

#include "adapter/adapter_oracle.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "geometry/embedding.hpp"
#include "jacobian/estimator.hpp"
#include "pipeline/commands.hpp"
#include "pipeline/options.hpp"
#include "probegen/dataset.hpp"
#include "probegen/png_io.hpp"
#include "pipeline/preprocess.hpp"
#include "support/test_util.hpp"

namespace sensorank::adapter {
namespace {

using sensorank::testing::TempDir;

std::string fake(const std::string& args) { return std::string(SENSORANK_FAKE_ADAPTER) + " " + args; }

Eigen::VectorXd normal_vec(Eigen::Index n, Pcg32& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

// The same map the fake server applies, evaluated in double precision.
Eigen::MatrixXd tanh_weight() {
  Eigen::MatrixXd w(3, 8);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 8; ++c) w(r, c) = std::sin(1.0 + r * 8 + c);
  return w;
}

TEST(Handshake, ParsesAllFields) {
  const auto hs = parse_handshake(
      R"({"protocol_version":"SRA/1","model":"m","checkpoint":"c.pt","output_dim":5,"input_shape":[3,4,4],)"
      R"("capabilities":{"embed":true,"jvp":true,"taps":["a","b"]},"reentrant":true})");
  EXPECT_EQ(hs.model, "m");
  EXPECT_EQ(hs.checkpoint, "c.pt");
  EXPECT_EQ(hs.output_dim, 5u);
  EXPECT_EQ(hs.input_shape.size(), 48u);
  EXPECT_TRUE(hs.can_jvp);
  EXPECT_EQ(hs.taps, (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(hs.reentrant);
}

TEST(Handshake, RejectsMalformed) {
  EXPECT_SR_ERROR(parse_handshake("hello"), ErrorCode::kAdapterProtocol);
  EXPECT_SR_ERROR(parse_handshake(R"({"protocol_version":"SRA/2","output_dim":1,"input_shape":[1,1,1]})"),
                  ErrorCode::kAdapterProtocol);
  EXPECT_SR_ERROR(parse_handshake(R"({"protocol_version":"SRA/1","output_dim":1,"input_shape":[1,1]})"),
                  ErrorCode::kAdapterProtocol);
  EXPECT_SR_ERROR(parse_handshake(R"({"protocol_version":"SRA/1","input_shape":[1,1,1]})"),
                  ErrorCode::kAdapterProtocol);
}

TEST(AdapterOracle, IdentityEchoIsBitExact) {
  AdapterOracle o(fake("identity 1 3 5"));
  EXPECT_EQ(o.input_shape().size(), 15u);
  EXPECT_EQ(o.output_dim(), 15u);
  EXPECT_EQ(o.handshake().model, "identity");
  Pcg32 rng(3, 1);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd x = normal_vec(15, rng);
    for (auto& v : x) v = static_cast<float>(v);
    EXPECT_EQ(o.embed(x), x);
    EXPECT_EQ(o.jvp(normal_vec(15, rng), x), x);
  }
  EXPECT_SR_ERROR(o.embed(Eigen::VectorXd::Zero(4)), ErrorCode::kDimensionMismatch);
  o.close();
  o.close();
  EXPECT_SR_ERROR(o.embed(Eigen::VectorXd::Zero(15)), ErrorCode::kAdapterProtocol);
}

TEST(AdapterOracle, TanhMapAndLinearJvp) {
  AdapterOracle o(fake("tanh"));
  EXPECT_EQ(o.taps(), (std::vector<std::string>{"pre", "out"}));
  const Eigen::MatrixXd w = tanh_weight();
  Pcg32 rng(4, 1);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = 0.3 * normal_vec(8, rng);
    const Eigen::VectorXd u = normal_vec(8, rng);
    const Eigen::VectorXd v = normal_vec(8, rng);
    const Eigen::VectorXd y = o.embed(x);
    const Eigen::VectorXd expected = (w * x).array().tanh().matrix();
    EXPECT_LT((y - expected).norm() / expected.norm(), 1e-5);
    const Eigen::VectorXd lhs = o.jvp(x, 2.0 * u - 0.5 * v);
    const Eigen::VectorXd rhs = 2.0 * o.jvp(x, u) - 0.5 * o.jvp(x, v);
    EXPECT_LT((lhs - rhs).norm() / rhs.norm(), 1e-4);
    const Eigen::VectorXd pre = o.jvp_at_tap(0, x, u);
    EXPECT_LT((pre - w * u).norm() / (w * u).norm(), 1e-5);
  }
  EXPECT_SR_ERROR(o.jvp_at_tap(2, Eigen::VectorXd::Zero(8), Eigen::VectorXd::Zero(8)), ErrorCode::kCapabilityMissing);
}

TEST(AdapterOracle, JerThroughAdapterMatchesMap) {
  AdapterOracle o(fake("identity 3 2 2"));
  jacobian::JerConfig cfg;
  cfg.n_images = 3;
  cfg.k = 5;
  EXPECT_NEAR(jacobian::jer_mean(o, cfg).mean, 5.0, 1e-5);
}

TEST(AdapterOracle, ProtocolFailures) {
  EXPECT_SR_ERROR(AdapterOracle(fake("badshake")), ErrorCode::kAdapterProtocol);
  EXPECT_SR_ERROR(AdapterOracle(fake("badversion")), ErrorCode::kAdapterProtocol);
  EXPECT_SR_ERROR(AdapterOracle("exit 0"), ErrorCode::kAdapterProtocol);
  AdapterOracle o(fake("fail"));
  try {
    o.embed(Eigen::VectorXd::Zero(8));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAdapterProtocol);
    EXPECT_NE(std::string(e.what()).find("model exploded"), std::string::npos) << e.what();
  }
}

TEST(AdapterOracle, EmbedCommandExportsEmb1) {
  TempDir dir;
  using pipeline::Json;
  const auto run = [](const std::string& command, const Json& flags) {
    return pipeline::run_command(command, pipeline::resolve_options(command, Json::object(), flags));
  };
  run("gen-probes", {{"gen_probes", {{"n", "2"}, {"out", (dir / "p").string()}}}});
  const Json r = run("embed", {{"embed",
                                {{"manifest", (dir / "p/manifest.json").string()},
                                 {"oracle", "adapter:" + fake("identity 3 8 8")},
                                 {"out", (dir / "e.emb").string()}}}});
  EXPECT_EQ(r["rows"], 10);
  EXPECT_EQ(r["dim"], 192);
  const auto emb = geometry::read_emb1(dir / "e.emb");
  const auto m = probegen::load_manifest(dir / "p/manifest.json");
  const auto img = probegen::read_png(dir / ("p/" + m.entries[1].images[2]));
  const Eigen::VectorXd x = pipeline::preprocess(img, 256, 224, {3, 8, 8});
  const auto row = emb.values().row(emb.find(m.entries[1].image_ids[2]));
  for (Eigen::Index j = 0; j < x.size(); ++j) EXPECT_EQ(row(j), static_cast<double>(static_cast<float>(x(j))));
}

}  // namespace
}  // namespace sensorank::adapter
