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

#include "probegen/scene.hpp"

namespace sensorank::probegen {

/// Object centers in pixel coordinates: (W/4, H/2) and (3W/4, H/2).
inline constexpr int kLeftCenterX = kCanvasPx / 4;
inline constexpr int kRightCenterX = 3 * kCanvasPx / 4;
inline constexpr int kCenterY = kCanvasPx / 2;

/// Hard membership test for a shape centered at (cx, cy), evaluated at the
/// center of pixel (x, y). No anti-aliasing.
bool shape_covers(Shape shape, int cx, int cy, int x, int y) noexcept;

/// Renders a scene onto a uniform gray 224x224 canvas. Pure function of `spec`.
Image render_scene(const SceneSpec& spec);

}  // namespace sensorank::probegen
