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
#include <optional>
#include <string_view>
#include <vector>

namespace sensorank::probegen {

enum class Shape : std::uint8_t { kCircle = 0, kSquare = 1, kTriangle = 2 };
inline constexpr int kShapeCount = 3;

enum class ColorName : std::uint8_t { kRed = 0, kGreen, kBlue, kYellow, kPurple, kCyan };
inline constexpr int kColorCount = 6;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr std::array<Rgb, kColorCount> kPalette{{
    {220, 60, 60},   // red
    {60, 180, 60},   // green
    {60, 60, 220},   // blue
    {220, 220, 60},  // yellow
    {160, 60, 200},  // purple
    {60, 200, 200},  // cyan
}};

inline constexpr int kCanvasPx = 224;
inline constexpr int kShapeHalfExtentPx = kCanvasPx / 6;  // 37
inline constexpr Rgb kBackground{200, 200, 200};

constexpr Rgb rgb_of(ColorName c) noexcept { return kPalette[static_cast<int>(c)]; }

std::string_view shape_name(Shape s) noexcept;
std::string_view color_name(ColorName c) noexcept;
std::optional<Shape> parse_shape(std::string_view name) noexcept;
std::optional<ColorName> parse_color(std::string_view name) noexcept;

struct Slot {
  Shape shape = Shape::kCircle;
  ColorName color = ColorName::kRed;
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// Two-object scene: one object on the left, one on the right. Canvas size,
/// shape extent and background are fixed constants above.
struct SceneSpec {
  Slot left;
  Slot right;
  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

enum class CandidateKind : std::uint8_t { kTarget, kShapeSwap, kShapeSwap2, kPartialMatch };
std::string_view candidate_kind_name(CandidateKind k) noexcept;

struct BindingTrial {
  SceneSpec query;
  std::array<SceneSpec, 4> candidates;
  std::array<CandidateKind, 4> kinds{};
  int target_index = 0;
};

enum class SameDiffLabel : std::uint8_t { kSame, kDifferent };
enum class DifferentKind : std::uint8_t { kShapeSwap, kShapeChange };

struct SameDiffPair {
  SceneSpec image_a;
  SceneSpec image_b;
  SameDiffLabel label = SameDiffLabel::kSame;
  std::optional<DifferentKind> different_kind;
};

/// Interleaved 8-bit RGB, row-major, kCanvasPx x kCanvasPx.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Rgb at(int x, int y) const noexcept {
    const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 3;
    return {rgb[o], rgb[o + 1], rgb[o + 2]};
  }
};

}  // namespace sensorank::probegen
