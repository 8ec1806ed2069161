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

#include "toyenc/factory.hpp"

#include "common/error.hpp"

namespace sensorank::toyenc {

bool is_bag_kind(const std::string& kind) noexcept { return kind == "bag_factored" || kind == "bag_joint"; }

std::unique_ptr<jacobian::JvpOracle> make_builtin_oracle(const EncoderSpec& spec) {
  if (spec.kind == "linear") {
    if (spec.output_dim == 0)
      return std::make_unique<LinearEncoder>(LinearEncoder::scaled_identity(spec.input_shape, spec.scale));
    return std::make_unique<LinearEncoder>(LinearEncoder::random(spec.input_shape, spec.output_dim, spec.seed));
  }
  if (spec.kind == "mlp") {
    return std::make_unique<MlpEncoder>(MlpEncoder::random(
        MlpConfig{.input_shape = spec.input_shape, .widths = spec.widths, .activation = spec.activation,
                  .seed = spec.seed}));
  }
  if (is_bag_kind(spec.kind))
    fail(ErrorCode::kInvalidArgument, "encoder '" + spec.kind + "' works on scene symbols and has no Jacobian");
  fail(ErrorCode::kInvalidArgument, "unknown builtin encoder '" + spec.kind + "'");
}

BagOfFeaturesEncoder make_bag_encoder(const EncoderSpec& spec) {
  require(is_bag_kind(spec.kind), ErrorCode::kInvalidArgument, "'" + spec.kind + "' is not a bag encoder");
  return BagOfFeaturesEncoder(spec.kind == "bag_joint" ? BagVariant::kJoint : BagVariant::kFactored, spec.bag_dim,
                              spec.seed);
}

}  // namespace sensorank::toyenc
