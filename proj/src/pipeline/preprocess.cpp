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

#include "pipeline/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "jacobian/probes.hpp"

namespace sensorank::pipeline {
namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<Tap> taps_for(std::size_t in, std::size_t out) {
  std::vector<Tap> taps(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (std::size_t i = 0; i < out; ++i) {
    double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in - 1));
    const auto lo = static_cast<std::size_t>(std::floor(src));
    taps[i] = {lo, std::min(lo + 1, in - 1), src - static_cast<double>(lo)};
  }
  return taps;
}

}  // namespace

Planar to_planar(const probegen::Image& image) {
  require(image.width > 0 && image.height > 0, ErrorCode::kFormat, "empty image");
  Planar p{3, static_cast<std::size_t>(image.height), static_cast<std::size_t>(image.width), {}};
  p.data.resize(3 * p.height * p.width);
  for (std::size_t y = 0; y < p.height; ++y)
    for (std::size_t x = 0; x < p.width; ++x) {
      const std::size_t o = (y * p.width + x) * 3;
      for (std::size_t c = 0; c < 3; ++c) p.at(c, y, x) = image.rgb[o + c] / 255.0;
    }
  return p;
}

Planar resize_bilinear(const Planar& in, std::size_t height, std::size_t width) {
  require(height > 0 && width > 0, ErrorCode::kInvalidArgument, "resize target must be non-empty");
  if (in.height == height && in.width == width) return in;
  const auto ty = taps_for(in.height, height);
  const auto tx = taps_for(in.width, width);
  Planar out{in.channels, height, width, std::vector<double>(in.channels * height * width)};
  for (std::size_t c = 0; c < in.channels; ++c)
    for (std::size_t y = 0; y < height; ++y) {
      const Tap& a = ty[y];
      for (std::size_t x = 0; x < width; ++x) {
        const Tap& b = tx[x];
        const double top = in.at(c, a.lo, b.lo) * (1.0 - b.frac) + in.at(c, a.lo, b.hi) * b.frac;
        const double bottom = in.at(c, a.hi, b.lo) * (1.0 - b.frac) + in.at(c, a.hi, b.hi) * b.frac;
        out.at(c, y, x) = top * (1.0 - a.frac) + bottom * a.frac;
      }
    }
  return out;
}

Planar center_crop(const Planar& in, std::size_t height, std::size_t width) {
  require(height <= in.height && width <= in.width, ErrorCode::kInvalidArgument,
          "crop larger than the image");
  const std::size_t y0 = (in.height - height) / 2;
  const std::size_t x0 = (in.width - width) / 2;
  Planar out{in.channels, height, width, std::vector<double>(in.channels * height * width)};
  for (std::size_t c = 0; c < in.channels; ++c)
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x) out.at(c, y, x) = in.at(c, y0 + y, x0 + x);
  return out;
}

Eigen::VectorXd preprocess(const probegen::Image& image, std::size_t resize, std::size_t crop,
                           const jacobian::InputShape& target) {
  require(target.channels == 3, ErrorCode::kDimensionMismatch, "encoder input must have 3 channels");
  require(crop >= 1 && crop <= resize, ErrorCode::kConfig, "crop must be in [1, resize]");
  Planar p = center_crop(resize_bilinear(to_planar(image), resize, resize), crop, crop);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < crop * crop; ++i) {
      double& v = p.data[c * crop * crop + i];
      v = (v - jacobian::kImageNetMean[c]) / jacobian::kImageNetStd[c];
    }
  p = resize_bilinear(p, target.height, target.width);
  return Eigen::Map<const Eigen::VectorXd>(p.data.data(), static_cast<Eigen::Index>(p.data.size()));
}

}  // namespace sensorank::pipeline
