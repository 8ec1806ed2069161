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

#include "toyenc/encoders.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "toyenc/dual.hpp"

namespace sensorank::toyenc {
namespace {

void check_input(const InputShape& shape, const Eigen::VectorXd& x, const char* what) {
  require(static_cast<std::size_t>(x.size()) == shape.size(), ErrorCode::kDimensionMismatch,
          std::string(what) + " has length " + std::to_string(x.size()) + ", expected " +
              std::to_string(shape.size()));
}

double apply(Activation a, double x) {
  switch (a) {
    case Activation::kTanh: return act::tanh(x);
    case Activation::kRelu: return act::relu(x);
    case Activation::kGelu: return act::gelu(x);
    case Activation::kIdentity: return x;
  }
  fail(ErrorCode::kInvalidArgument, "unsupported activation");
}

double apply_grad(Activation a, double x) {
  switch (a) {
    case Activation::kTanh: return act::tanh_grad(x);
    case Activation::kRelu: return act::relu_grad(x);
    case Activation::kGelu: return act::gelu_grad(x);
    case Activation::kIdentity: return 1.0;
  }
  fail(ErrorCode::kInvalidArgument, "unsupported activation");
}

Dual apply(Activation a, const Dual& z) { return {apply(a, z.v), apply_grad(a, z.v) * z.d}; }

Eigen::MatrixXd gaussian_matrix(Pcg32& rng, std::size_t rows, std::size_t cols, double stddev) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = stddev * rng.normal();
  return m;
}

}  // namespace

// ---- LinearEncoder ---------------------------------------------------------

LinearEncoder::LinearEncoder(Eigen::MatrixXd weight, Eigen::VectorXd bias, InputShape shape)
    : weight_(std::move(weight)), bias_(std::move(bias)), shape_(shape) {
  require(static_cast<std::size_t>(weight_.cols()) == shape_.size(), ErrorCode::kDimensionMismatch,
          "linear encoder weight columns do not match the input shape");
  require(bias_.size() == weight_.rows(), ErrorCode::kDimensionMismatch, "linear encoder bias length mismatch");
  require(weight_.allFinite() && bias_.allFinite(), ErrorCode::kInvalidArgument, "non-finite encoder parameters");
}

LinearEncoder LinearEncoder::scaled_identity(const InputShape& shape, double scale) {
  require(std::isfinite(scale), ErrorCode::kInvalidArgument, "non-finite encoder parameters");
  LinearEncoder enc;
  enc.bias_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape.size()));
  enc.shape_ = shape;
  enc.identity_scale_ = scale;
  return enc;
}

Eigen::MatrixXd LinearEncoder::weight() const {
  if (!identity_scale_) return weight_;
  const auto n = static_cast<Eigen::Index>(shape_.size());
  return *identity_scale_ * Eigen::MatrixXd::Identity(n, n);
}

LinearEncoder LinearEncoder::random(const InputShape& shape, std::size_t output_dim, std::uint64_t seed) {
  Pcg32 rng = Pcg32::stream(seed, StreamDomain::kEncoderInit, 0);
  Eigen::MatrixXd w = gaussian_matrix(rng, output_dim, shape.size(), 1.0 / std::sqrt(double(shape.size())));
  return LinearEncoder(std::move(w), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(output_dim)), shape);
}

Eigen::VectorXd LinearEncoder::embed(const Eigen::VectorXd& x) const {
  check_input(shape_, x, "input");
  if (identity_scale_) return *identity_scale_ * x + bias_;
  return weight_ * x + bias_;
}

Eigen::VectorXd LinearEncoder::jvp(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  check_input(shape_, x, "input");
  check_input(shape_, v, "direction");
  if (identity_scale_) return *identity_scale_ * v;
  return weight_ * v;
}

Eigen::MatrixXd LinearEncoder::jvp_batch(const Eigen::VectorXd& x, const Eigen::MatrixXd& directions,
                                         std::optional<std::size_t> tap) const {
  if (tap) return JvpOracle::jvp_batch(x, directions, tap);
  check_input(shape_, x, "input");
  require(static_cast<std::size_t>(directions.rows()) == shape_.size(), ErrorCode::kDimensionMismatch,
          "direction matrix rows do not match the input shape");
  if (identity_scale_) return *identity_scale_ * directions;
  return weight_ * directions;
}

// ---- MlpEncoder ------------------------------------------------------------

std::string_view activation_name(Activation a) noexcept {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kGelu: return "gelu";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

std::optional<Activation> parse_activation(std::string_view name) noexcept {
  for (auto a : {Activation::kTanh, Activation::kRelu, Activation::kGelu, Activation::kIdentity})
    if (activation_name(a) == name) return a;
  return std::nullopt;
}

MlpEncoder::MlpEncoder(std::vector<DenseLayer> layers, InputShape shape) : layers_(std::move(layers)), shape_(shape) {
  require(!layers_.empty(), ErrorCode::kInvalidArgument, "MLP needs at least one layer");
  Eigen::Index fan_in = static_cast<Eigen::Index>(shape_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    require(layer.weight.cols() == fan_in && layer.bias.size() == layer.weight.rows(),
            ErrorCode::kDimensionMismatch, "MLP layer " + std::to_string(l + 1) + " has inconsistent shapes");
    require(layer.weight.allFinite() && layer.bias.allFinite(), ErrorCode::kInvalidArgument,
            "MLP layer " + std::to_string(l + 1) + " has non-finite parameters");
    fan_in = layer.weight.rows();
  }
}

MlpEncoder MlpEncoder::random(const MlpConfig& config) {
  require(!config.widths.empty(), ErrorCode::kInvalidArgument, "MLP needs at least one width");
  Pcg32 rng = Pcg32::stream(config.seed, StreamDomain::kEncoderInit, 0);
  std::vector<DenseLayer> layers;
  std::size_t fan_in = config.input_shape.size();
  for (std::size_t width : config.widths) {
    require(width >= 1, ErrorCode::kInvalidArgument, "MLP widths must be positive");
    layers.push_back({gaussian_matrix(rng, width, fan_in, 1.0 / std::sqrt(double(fan_in))),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width)), config.activation});
    fan_in = width;
  }
  return MlpEncoder(std::move(layers), config.input_shape);
}

std::size_t MlpEncoder::output_dim() const { return static_cast<std::size_t>(layers_.back().weight.rows()); }

std::vector<std::string> MlpEncoder::taps() const {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < layers_.size(); ++l) names.push_back("layer" + std::to_string(l + 1));
  return names;
}

Eigen::VectorXd MlpEncoder::embed_prefix(const Eigen::VectorXd& x, std::size_t depth) const {
  check_input(shape_, x, "input");
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < depth; ++l) {
    const auto& layer = layers_[l];
    Eigen::VectorXd z = layer.weight * a + layer.bias;
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = apply(layer.activation, z(i));
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd MlpEncoder::embed(const Eigen::VectorXd& x) const { return embed_prefix(x, layers_.size()); }

Eigen::VectorXd MlpEncoder::jvp_prefix(std::size_t depth, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  check_input(shape_, x, "input");
  check_input(shape_, v, "direction");
  std::vector<Dual> a(static_cast<std::size_t>(x.size()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = Dual(x(static_cast<Eigen::Index>(i)), v(static_cast<Eigen::Index>(i)));

  for (std::size_t l = 0; l < depth; ++l) {
    const auto& layer = layers_[l];
    std::vector<Dual> next(static_cast<std::size_t>(layer.weight.rows()));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      Dual z(layer.bias(r));
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) z += layer.weight(r, c) * a[static_cast<std::size_t>(c)];
      next[static_cast<std::size_t>(r)] = apply(layer.activation, z);
    }
    a = std::move(next);
  }

  Eigen::VectorXd out(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out(static_cast<Eigen::Index>(i)) = a[i].d;
  return out;
}

Eigen::VectorXd MlpEncoder::jvp(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  return jvp_prefix(layers_.size(), x, v);
}

Eigen::VectorXd MlpEncoder::jvp_at_tap(std::size_t tap, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  require(tap < layers_.size(), ErrorCode::kCapabilityMissing, "tap index out of range");
  return jvp_prefix(tap + 1, x, v);
}

Eigen::MatrixXd MlpEncoder::jvp_batch(const Eigen::VectorXd& x, const Eigen::MatrixXd& directions,
                                      std::optional<std::size_t> tap) const {
  check_input(shape_, x, "input");
  require(static_cast<std::size_t>(directions.rows()) == shape_.size(), ErrorCode::kDimensionMismatch,
          "direction matrix rows do not match the input shape");
  const std::size_t depth = tap ? *tap + 1 : layers_.size();
  require(depth <= layers_.size(), ErrorCode::kCapabilityMissing, "tap index out of range");

  Eigen::VectorXd a = x;
  Eigen::MatrixXd tangents = directions;
  for (std::size_t l = 0; l < depth; ++l) {
    const auto& layer = layers_[l];
    Eigen::VectorXd z = layer.weight * a + layer.bias;
    tangents = layer.weight * tangents;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      tangents.row(i) *= apply_grad(layer.activation, z(i));
      z(i) = apply(layer.activation, z(i));
    }
    a = std::move(z);
  }
  return tangents;
}

Eigen::VectorXd jvp_finite_diff(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& v, double h) {
  require(h > 0.0, ErrorCode::kInvalidArgument, "finite-difference step must be positive");
  return (f(x + h * v) - f(x - h * v)) / (2.0 * h);
}

// ---- BagOfFeaturesEncoder --------------------------------------------------

std::string_view bag_variant_name(BagVariant v) noexcept { return v == BagVariant::kJoint ? "joint" : "factored"; }

BagOfFeaturesEncoder::BagOfFeaturesEncoder(BagVariant variant, std::size_t dim, std::uint64_t seed)
    : variant_(variant), dim_(dim) {
  require(dim >= 1, ErrorCode::kInvalidArgument, "bag encoder dimension must be positive");
  Pcg32 rng = Pcg32::stream(seed, StreamDomain::kBagTables, 0);
  const auto draw = [&] {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    return v;
  };
  if (variant == BagVariant::kJoint) {
    for (int i = 0; i < probegen::kShapeCount * 2; ++i) shape_codes_.push_back(draw());
  } else {
    for (int i = 0; i < probegen::kShapeCount; ++i) shape_codes_.push_back(draw());
    for (int i = 0; i < 2; ++i) position_codes_.push_back(draw());
  }
}

Eigen::VectorXd BagOfFeaturesEncoder::embed(const probegen::SceneSpec& scene) const {
  const int left = static_cast<int>(scene.left.shape);
  const int right = static_cast<int>(scene.right.shape);
  if (variant_ == BagVariant::kJoint) {
    // (shape, position) code index: shape * 2 + position, position L=0, R=1.
    return shape_codes_[left * 2] + shape_codes_[right * 2 + 1];
  }
  return shape_codes_[left] + shape_codes_[right] + position_codes_[0] + position_codes_[1];
}

}  // namespace sensorank::toyenc
