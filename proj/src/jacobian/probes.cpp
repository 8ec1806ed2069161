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

#include "jacobian/probes.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace sensorank::jacobian {

Eigen::VectorXd imagenet_normalize(const Eigen::VectorXd& pixels, const InputShape& shape) {
  require(shape.channels == 3, ErrorCode::kInvalidArgument, "ImageNet normalization needs 3 channels");
  require(static_cast<std::size_t>(pixels.size()) == shape.size(), ErrorCode::kDimensionMismatch,
          "pixel vector does not match input shape");
  Eigen::VectorXd out(pixels.size());
  const std::size_t plane = shape.height * shape.width;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < plane; ++i) {
      const auto idx = static_cast<Eigen::Index>(c * plane + i);
      out(idx) = (pixels(idx) - kImageNetMean[c]) / kImageNetStd[c];
    }
  return out;
}

Eigen::VectorXd raw_probe_image(std::uint64_t seed, std::size_t index, const InputShape& shape) {
  Pcg32 rng = Pcg32::stream(seed, StreamDomain::kProbeImage, index);
  Eigen::VectorXd x(static_cast<Eigen::Index>(shape.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x(i) = std::clamp(kProbePixelMean + kProbePixelStd * rng.normal(), 0.0, 1.0);
  return x;
}

ProbeBatch sample_probe_inputs(std::size_t n, std::uint64_t seed, const InputShape& shape, bool keep_raw) {
  require(n >= 1, ErrorCode::kInvalidArgument, "probe batch needs at least one image");
  ProbeBatch batch;
  batch.seed = seed;
  batch.shape = shape;
  batch.inputs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd raw = raw_probe_image(seed, i, shape);
    batch.inputs.push_back(imagenet_normalize(raw, shape));
    if (keep_raw) batch.raw.push_back(std::move(raw));
  }
  return batch;
}

DirectionSet orthonormal_directions(std::size_t input_dim, std::size_t k, std::uint64_t seed, std::uint64_t stream) {
  require(k >= 1, ErrorCode::kInvalidArgument, "need at least one probe direction");
  require(k <= input_dim, ErrorCode::kDimensionMismatch,
          "cannot draw " + std::to_string(k) + " orthonormal directions in dimension " + std::to_string(input_dim));

  Pcg32 rng = Pcg32::stream(seed, StreamDomain::kProbeDirections, stream);
  Eigen::MatrixXd q(static_cast<Eigen::Index>(input_dim), static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, j) = rng.normal();

  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    auto v = q.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
    const double norm = v.norm();
    require(norm > 1e-10, ErrorCode::kInternal, "Gram-Schmidt breakdown while orthonormalizing directions");
    v /= norm;
  }
  return {std::move(q), seed};
}

}  // namespace sensorank::jacobian
