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

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "geometry/embedding.hpp"

namespace sensorank::geometry {

/// Functional applied to each local covariance spectrum.
enum class LocalMetric {
  kVariance,            // isotropy score 1 - l1/sum l
  kEffectiveRank,       // exp(entropy)
  kParticipationRatio,  // unnormalized (sum l)^2 / sum l^2
};

std::string_view local_metric_name(LocalMetric m) noexcept;
std::optional<LocalMetric> parse_local_metric(std::string_view name) noexcept;

struct LocalIsotropyConfig {
  std::size_t k = 16;
  std::size_t n_anchors = 500;
  LocalMetric metric = LocalMetric::kVariance;
  std::uint64_t seed = 42;
  bool include_anchor = false;
};

struct LocalIsotropyResult {
  double mean = 0.0;
  std::vector<std::size_t> anchors;
  std::vector<double> per_anchor;
};

/// Mean over seeded anchors (sampled without replacement) of the chosen
/// functional on the covariance of each anchor's k Euclidean nearest
/// neighbors. Neighborhoods with zero variance score 0.
LocalIsotropyResult local_isotropy(const EmbeddingMatrix& embeddings, const LocalIsotropyConfig& config);

/// Indices of the k nearest rows to `anchor` by Euclidean distance, ties
/// broken by lower index. The anchor row itself is skipped unless
/// `include_anchor`.
std::vector<std::size_t> nearest_rows(const RowMatrix& rows, std::size_t anchor, std::size_t k, bool include_anchor);

/// Anchor indices: the first n of a seeded Fisher-Yates permutation of [0, N).
std::vector<std::size_t> sample_anchors(std::size_t n_rows, std::size_t n_anchors, std::uint64_t seed);

struct SweepCell {
  std::size_t k = 0;
  LocalMetric metric = LocalMetric::kVariance;
  double value = 0.0;
};

/// Robustness grid over neighborhood sizes x metric formulations.
std::vector<SweepCell> local_isotropy_sweep(const EmbeddingMatrix& embeddings,
                                            const std::vector<std::size_t>& ks,
                                            const std::vector<LocalMetric>& metrics,
                                            std::size_t n_anchors, std::uint64_t seed);

}  // namespace sensorank::geometry
