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
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "jacobian/oracle.hpp"
#include "probegen/scene.hpp"

namespace sensorank::toyenc {

using jacobian::InputShape;

/// f(x) = W x + b. Jacobian is W everywhere.
class LinearEncoder final : public jacobian::JvpOracle {
 public:
  LinearEncoder(Eigen::MatrixXd weight, Eigen::VectorXd bias, InputShape shape);

  /// c * I on the given input shape, applied without materializing I.
  static LinearEncoder scaled_identity(const InputShape& shape, double scale = 1.0);

  /// Seeded Gaussian weight (std 1/sqrt(n)), zero bias.
  static LinearEncoder random(const InputShape& shape, std::size_t output_dim, std::uint64_t seed);

  InputShape input_shape() const override { return shape_; }
  std::size_t output_dim() const override { return static_cast<std::size_t>(bias_.size()); }
  Eigen::VectorXd embed(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd jvp(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const override;
  Eigen::MatrixXd jvp_batch(const Eigen::VectorXd& x, const Eigen::MatrixXd& directions,
                            std::optional<std::size_t> tap) const override;

  /// Dense weight; materializes c * I for scaled identities.
  Eigen::MatrixXd weight() const;

 private:
  LinearEncoder() = default;

  Eigen::MatrixXd weight_;
  Eigen::VectorXd bias_;
  InputShape shape_;
  std::optional<double> identity_scale_;
};

enum class Activation { kTanh, kRelu, kGelu, kIdentity };
std::string_view activation_name(Activation a) noexcept;
std::optional<Activation> parse_activation(std::string_view name) noexcept;

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::kTanh;
};

struct MlpConfig {
  InputShape input_shape{3, 16, 16};
  std::vector<std::size_t> widths{64, 64, 32};
  Activation activation = Activation::kTanh;
  std::uint64_t seed = 42;
};

/// Fully connected stack; every layer is followed by its activation and
/// every layer output is a tap ("layer1", "layer2", ...). `jvp` propagates
/// dual numbers; `jvp_batch` propagates a tangent matrix layer by layer.
class MlpEncoder final : public jacobian::JvpOracle {
 public:
  MlpEncoder(std::vector<DenseLayer> layers, InputShape shape);

  /// Weights ~ N(0, 1/fan_in), zero biases.
  static MlpEncoder random(const MlpConfig& config);

  InputShape input_shape() const override { return shape_; }
  std::size_t output_dim() const override;
  std::vector<std::string> taps() const override;

  Eigen::VectorXd embed(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd jvp(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const override;
  Eigen::VectorXd jvp_at_tap(std::size_t tap, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const override;
  Eigen::MatrixXd jvp_batch(const Eigen::VectorXd& x, const Eigen::MatrixXd& directions,
                            std::optional<std::size_t> tap) const override;

  /// Output of the first `depth` layers.
  Eigen::VectorXd embed_prefix(const Eigen::VectorXd& x, std::size_t depth) const;

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

 private:
  Eigen::VectorXd jvp_prefix(std::size_t depth, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

  std::vector<DenseLayer> layers_;
  InputShape shape_;
};

/// Central difference (f(x + h v) - f(x - h v)) / 2h. Independent of the
/// dual-number path; used as a test oracle.
Eigen::VectorXd jvp_finite_diff(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& v, double h);

enum class BagVariant {
  kJoint,     // phi(left.shape, L) + phi(right.shape, R)
  kFactored,  // phi(left.shape) + phi(right.shape) + psi(L) + psi(R)
};

std::string_view bag_variant_name(BagVariant v) noexcept;

/// Permutation-invariant aggregate of per-object code vectors. Works on
/// scene symbols and ignores color.
class BagOfFeaturesEncoder {
 public:
  BagOfFeaturesEncoder(BagVariant variant, std::size_t dim, std::uint64_t seed);

  BagVariant variant() const noexcept { return variant_; }
  std::size_t dim() const noexcept { return dim_; }

  Eigen::VectorXd embed(const probegen::SceneSpec& scene) const;

 private:
  BagVariant variant_;
  std::size_t dim_;
  std::vector<Eigen::VectorXd> shape_codes_;     // factored: per shape; joint: per (shape, position)
  std::vector<Eigen::VectorXd> position_codes_;  // factored only
};

inline Eigen::VectorXd bag_embed(const BagOfFeaturesEncoder& encoder, const probegen::SceneSpec& scene) {
  return encoder.embed(scene);
}

}  // namespace sensorank::toyenc
