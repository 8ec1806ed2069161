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

#include "probegen/render.hpp"

#include <cmath>
#include <cstdlib>

namespace sensorank::probegen {

bool shape_covers(Shape shape, int cx, int cy, int x, int y) noexcept {
  // Doubled coordinates keep circle/square tests in exact integer arithmetic:
  // pixel center offset = (2x + 1 - 2cx) / 2.
  const long dx2 = 2L * x + 1 - 2L * cx;
  const long dy2 = 2L * y + 1 - 2L * cy;
  const long r2 = 2L * kShapeHalfExtentPx;
  switch (shape) {
    case Shape::kCircle:
      return dx2 * dx2 + dy2 * dy2 <= r2 * r2;
    case Shape::kSquare:
      return std::labs(dx2) <= r2 && std::labs(dy2) <= r2;
    case Shape::kTriangle: {
      // Equilateral, apex up, base = full box width, centered vertically.
      const double side = 2.0 * kShapeHalfExtentPx;
      const double height = side * std::sqrt(3.0) / 2.0;
      const double dx = 0.5 * static_cast<double>(dx2);
      const double depth = 0.5 * static_cast<double>(dy2) + height / 2.0;  // below apex
      if (depth < 0.0 || depth > height) return false;
      return std::abs(dx) <= depth / std::sqrt(3.0);
    }
  }
  return false;
}

Image render_scene(const SceneSpec& spec) {
  Image img;
  img.width = kCanvasPx;
  img.height = kCanvasPx;
  img.rgb.resize(static_cast<std::size_t>(kCanvasPx) * kCanvasPx * 3);

  const auto paint = [&](int x, int y, Rgb c) {
    const std::size_t o = (static_cast<std::size_t>(y) * kCanvasPx + x) * 3;
    img.rgb[o] = c.r;
    img.rgb[o + 1] = c.g;
    img.rgb[o + 2] = c.b;
  };

  for (int y = 0; y < kCanvasPx; ++y)
    for (int x = 0; x < kCanvasPx; ++x) paint(x, y, kBackground);

  const struct {
    const Slot& slot;
    int cx;
  } objects[] = {{spec.left, kLeftCenterX}, {spec.right, kRightCenterX}};

  for (const auto& obj : objects) {
    const Rgb color = rgb_of(obj.slot.color);
    for (int y = kCenterY - kShapeHalfExtentPx - 1; y <= kCenterY + kShapeHalfExtentPx; ++y)
      for (int x = obj.cx - kShapeHalfExtentPx - 1; x <= obj.cx + kShapeHalfExtentPx; ++x)
        if (shape_covers(obj.slot.shape, obj.cx, kCenterY, x, y)) paint(x, y, color);
  }
  return img;
}

}  // namespace sensorank::probegen
