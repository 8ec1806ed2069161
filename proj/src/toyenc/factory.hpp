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

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "jacobian/oracle.hpp"
#include "toyenc/encoders.hpp"

namespace sensorank::toyenc {

/// Encoder block of a run config: {kind, seed, widths, activation, input_shape}.
/// kind is one of linear, mlp, bag_factored, bag_joint. For linear,
/// output_dim = 0 means scale * I; otherwise a seeded random W.
struct EncoderSpec {
  std::string kind = "mlp";
  std::uint64_t seed = 42;
  std::vector<std::size_t> widths{64, 64, 32};
  Activation activation = Activation::kTanh;
  InputShape input_shape{3, 16, 16};
  double scale = 1.0;
  std::size_t output_dim = 0;
  std::size_t bag_dim = 64;
};

bool is_bag_kind(const std::string& kind) noexcept;

/// Throws InvalidArgument for bag kinds (they embed scenes, not pixels).
std::unique_ptr<jacobian::JvpOracle> make_builtin_oracle(const EncoderSpec& spec);

BagOfFeaturesEncoder make_bag_encoder(const EncoderSpec& spec);

}  // namespace sensorank::toyenc
