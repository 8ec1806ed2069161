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

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "jacobian/oracle.hpp"
#include "probegen/scene.hpp"

namespace sensorank::pipeline {

/// CHW planar float image.
struct Planar {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  double& at(std::size_t c, std::size_t y, std::size_t x) { return data[(c * height + y) * width + x]; }
  double at(std::size_t c, std::size_t y, std::size_t x) const { return data[(c * height + y) * width + x]; }
};

/// RGB8 to [0, 1] CHW.
Planar to_planar(const probegen::Image& image);

/// Bilinear resampling with half-pixel centers and edge clamping, no antialiasing.
Planar resize_bilinear(const Planar& in, std::size_t height, std::size_t width);

Planar center_crop(const Planar& in, std::size_t height, std::size_t width);

/// Resize to `resize` x `resize`, center-crop to `crop`, ImageNet-normalize,
/// then resample to the oracle input resolution when it differs from `crop`.
Eigen::VectorXd preprocess(const probegen::Image& image, std::size_t resize, std::size_t crop,
                           const jacobian::InputShape& target);

}  // namespace sensorank::pipeline
