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

#include "common/rng.hpp"
#include "probegen/scene.hpp"

namespace sensorank::probegen {

/// Attribute-binding trial. Draw order from `rng`:
///   s1, s2 (distinct shapes); query colors (distinct); target colors from
///   the four unused colors; D2 color order from the last two colors;
///   candidate shuffle.
/// D1 swaps the shapes and keeps the target colors per slot, D2 swaps the
/// shapes and uses the two colors unused by query and target, D3 repeats s1
/// in both slots with the target colors.
BindingTrial gen_binding_trial(Pcg32& rng);

/// Same/different pair with a caller-chosen label (datasets alternate
/// labels to keep an exact 50/50 split). Image B is always recolored with
/// two colors disjoint from image A's, so color never carries the label.
/// Shape-swap pairs use distinct shapes so the swap changes the structure.
SameDiffPair gen_samediff_pair(Pcg32& rng, SameDiffLabel label);

/// Label for the i-th pair of a dataset: even -> same, odd -> different.
constexpr SameDiffLabel samediff_label_for(std::size_t index) noexcept {
  return index % 2 == 0 ? SameDiffLabel::kSame : SameDiffLabel::kDifferent;
}

}  // namespace sensorank::probegen
