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

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "jacobian/oracle.hpp"

namespace sensorank::jacobian {

inline constexpr double kProbePixelMean = 0.45;
inline constexpr double kProbePixelStd = 0.225;
inline constexpr std::array<double, 3> kImageNetMean{0.485, 0.456, 0.406};
inline constexpr std::array<double, 3> kImageNetStd{0.229, 0.224, 0.225};

/// Per-channel ImageNet normalization of a CHW vector with pixel values in [0, 1].
Eigen::VectorXd imagenet_normalize(const Eigen::VectorXd& pixels, const InputShape& shape);

/// The `index`-th probe image of a seeded draw: i.i.d. N(0.45, 0.225^2)
/// pixels clipped to [0, 1], before normalization. Images are independent
/// streams, so image i is reproducible on its own.
Eigen::VectorXd raw_probe_image(std::uint64_t seed, std::size_t index, const InputShape& shape);

struct ProbeBatch {
  std::uint64_t seed = 0;
  InputShape shape;
  std::vector<Eigen::VectorXd> inputs;  // normalized
  std::vector<Eigen::VectorXd> raw;     // pre-normalization, only if requested
};

ProbeBatch sample_probe_inputs(std::size_t n, std::uint64_t seed, const InputShape& shape, bool keep_raw = false);

struct DirectionSet {
  Eigen::MatrixXd matrix;  // input_dim x k, orthonormal columns
  std::uint64_t seed = 0;
};

/// Gaussian input_dim x k matrix orthonormalized by modified Gram-Schmidt
/// with one re-orthogonalization pass. `stream` selects an independent draw
/// under the same seed (one per probe image).
DirectionSet orthonormal_directions(std::size_t input_dim, std::size_t k, std::uint64_t seed,
                                    std::uint64_t stream = 0);

}  // namespace sensorank::jacobian
