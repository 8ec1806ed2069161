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

#include "probegen/scene.hpp"

namespace sensorank::probegen {
namespace {
constexpr std::array<std::string_view, kShapeCount> kShapeNames{"circle", "square", "triangle"};
constexpr std::array<std::string_view, kColorCount> kColorNames{"red", "green", "blue",
                                                                "yellow", "purple", "cyan"};
}  // namespace

std::string_view shape_name(Shape s) noexcept { return kShapeNames[static_cast<int>(s)]; }

std::string_view color_name(ColorName c) noexcept { return kColorNames[static_cast<int>(c)]; }

std::optional<Shape> parse_shape(std::string_view name) noexcept {
  for (int i = 0; i < kShapeCount; ++i)
    if (kShapeNames[i] == name) return static_cast<Shape>(i);
  return std::nullopt;
}

std::optional<ColorName> parse_color(std::string_view name) noexcept {
  for (int i = 0; i < kColorCount; ++i)
    if (kColorNames[i] == name) return static_cast<ColorName>(i);
  return std::nullopt;
}

std::string_view candidate_kind_name(CandidateKind k) noexcept {
  switch (k) {
    case CandidateKind::kTarget: return "target";
    case CandidateKind::kShapeSwap: return "shape_swap";
    case CandidateKind::kShapeSwap2: return "shape_swap2";
    case CandidateKind::kPartialMatch: return "partial_match";
  }
  return "?";
}

}  // namespace sensorank::probegen
