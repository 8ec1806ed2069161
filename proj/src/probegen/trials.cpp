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

#include "probegen/trials.hpp"

#include <algorithm>
#include <vector>

namespace sensorank::probegen {
namespace {

Shape draw_shape(Pcg32& rng) { return static_cast<Shape>(rng.bounded(kShapeCount)); }

Shape draw_shape_other_than(Pcg32& rng, Shape excluded) {
  const auto offset = 1 + rng.bounded(kShapeCount - 1);
  return static_cast<Shape>((static_cast<int>(excluded) + offset) % kShapeCount);
}

// Removes and returns a uniformly chosen element of `pool`.
ColorName take_color(Pcg32& rng, std::vector<ColorName>& pool) {
  const auto i = rng.bounded(static_cast<std::uint32_t>(pool.size()));
  const ColorName c = pool[i];
  pool.erase(pool.begin() + i);
  return c;
}

std::vector<ColorName> all_colors() {
  std::vector<ColorName> pool;
  for (int c = 0; c < kColorCount; ++c) pool.push_back(static_cast<ColorName>(c));
  return pool;
}

}  // namespace

BindingTrial gen_binding_trial(Pcg32& rng) {
  const Shape s1 = draw_shape(rng);
  const Shape s2 = draw_shape_other_than(rng, s1);

  auto pool = all_colors();
  const ColorName q1 = take_color(rng, pool);
  const ColorName q2 = take_color(rng, pool);
  const ColorName t1 = take_color(rng, pool);
  const ColorName t2 = take_color(rng, pool);
  const ColorName f1 = take_color(rng, pool);
  const ColorName f2 = pool.front();

  struct Candidate {
    SceneSpec scene;
    CandidateKind kind;
  };
  std::array<Candidate, 4> candidates{{
      {{{s1, t1}, {s2, t2}}, CandidateKind::kTarget},
      {{{s2, t1}, {s1, t2}}, CandidateKind::kShapeSwap},
      {{{s2, f1}, {s1, f2}}, CandidateKind::kShapeSwap2},
      {{{s1, t1}, {s1, t2}}, CandidateKind::kPartialMatch},
  }};
  rng.shuffle(std::span<Candidate>(candidates));

  BindingTrial trial;
  trial.query = {{s1, q1}, {s2, q2}};
  for (int i = 0; i < 4; ++i) {
    trial.candidates[i] = candidates[i].scene;
    trial.kinds[i] = candidates[i].kind;
    if (candidates[i].kind == CandidateKind::kTarget) trial.target_index = i;
  }
  return trial;
}

SameDiffPair gen_samediff_pair(Pcg32& rng, SameDiffLabel label) {
  SameDiffPair pair;
  pair.label = label;

  std::optional<DifferentKind> kind;
  if (label == SameDiffLabel::kDifferent)
    kind = rng.bounded(2) == 0 ? DifferentKind::kShapeSwap : DifferentKind::kShapeChange;
  pair.different_kind = kind;

  const Shape s1 = draw_shape(rng);
  const Shape s2 = kind == DifferentKind::kShapeSwap ? draw_shape_other_than(rng, s1) : draw_shape(rng);

  auto pool = all_colors();
  const ColorName a1 = take_color(rng, pool);
  const ColorName a2 = take_color(rng, pool);
  const ColorName b1 = take_color(rng, pool);
  const ColorName b2 = take_color(rng, pool);

  pair.image_a = {{s1, a1}, {s2, a2}};
  if (!kind) {
    pair.image_b = {{s1, b1}, {s2, b2}};
  } else if (*kind == DifferentKind::kShapeSwap) {
    pair.image_b = {{s2, b1}, {s1, b2}};
  } else {
    pair.image_b = {{draw_shape_other_than(rng, s1), b1}, {s2, b2}};
  }
  return pair;
}

}  // namespace sensorank::probegen
