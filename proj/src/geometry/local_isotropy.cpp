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

#include "geometry/local_isotropy.hpp"

#include <algorithm>
#include <numeric>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "geometry/spectrum.hpp"

namespace sensorank::geometry {
namespace {

double local_score(const RowMatrix& neighborhood, LocalMetric metric) {
  SingularSpectrum s;
  try {
    s = covariance_spectrum(neighborhood);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAllZeroSpectrum) return 0.0;
    throw;
  }
  switch (metric) {
    case LocalMetric::kVariance: return isotropy_score(s);
    case LocalMetric::kEffectiveRank: return effective_rank_entropy(s);
    case LocalMetric::kParticipationRatio: return participation_ratio(s, false, s.values.size());
  }
  return 0.0;
}

}  // namespace

std::string_view local_metric_name(LocalMetric m) noexcept {
  switch (m) {
    case LocalMetric::kVariance: return "variance";
    case LocalMetric::kEffectiveRank: return "effective_rank";
    case LocalMetric::kParticipationRatio: return "participation_ratio";
  }
  return "?";
}

std::optional<LocalMetric> parse_local_metric(std::string_view name) noexcept {
  for (auto m : {LocalMetric::kVariance, LocalMetric::kEffectiveRank, LocalMetric::kParticipationRatio})
    if (local_metric_name(m) == name) return m;
  return std::nullopt;
}

std::vector<std::size_t> nearest_rows(const RowMatrix& rows, std::size_t anchor, std::size_t k,
                                      bool include_anchor) {
  const std::size_t n = static_cast<std::size_t>(rows.rows());
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n);
  const auto a = rows.row(static_cast<Eigen::Index>(anchor));
  for (std::size_t i = 0; i < n; ++i) {
    if (i == anchor && !include_anchor) continue;
    dist.emplace_back((rows.row(static_cast<Eigen::Index>(i)) - a).squaredNorm(), i);
  }
  k = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

std::vector<std::size_t> sample_anchors(std::size_t n_rows, std::size_t n_anchors, std::uint64_t seed) {
  require(n_anchors <= n_rows, ErrorCode::kInvalidArgument,
          "requested " + std::to_string(n_anchors) + " anchors from " + std::to_string(n_rows) + " rows");
  std::vector<std::size_t> perm(n_rows);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Pcg32 rng = Pcg32::stream(seed, StreamDomain::kAnchors, 0);
  // Partial Fisher-Yates from the front.
  for (std::size_t i = 0; i < n_anchors; ++i) {
    const std::size_t j = i + rng.bounded(static_cast<std::uint32_t>(n_rows - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(n_anchors);
  return perm;
}

LocalIsotropyResult local_isotropy(const EmbeddingMatrix& embeddings, const LocalIsotropyConfig& config) {
  embeddings.validate();
  const std::size_t n = embeddings.rows();
  require(config.k >= 2, ErrorCode::kInvalidArgument, "local neighborhood size k must be >= 2");
  require(config.k < n, ErrorCode::kInsufficientNeighbors,
          "k=" + std::to_string(config.k) + " requires more than " + std::to_string(config.k) + " rows, got " +
              std::to_string(n));
  require(config.n_anchors >= 1, ErrorCode::kInvalidArgument, "need at least one anchor");

  LocalIsotropyResult result;
  result.anchors = sample_anchors(n, config.n_anchors, config.seed);
  result.per_anchor.assign(result.anchors.size(), 0.0);

  const RowMatrix& rows = embeddings.values();
  parallel_for(result.anchors.size(), true, [&](std::size_t a) {
    const auto nbrs = nearest_rows(rows, result.anchors[a], config.k, config.include_anchor);
    RowMatrix hood(static_cast<Eigen::Index>(nbrs.size()), rows.cols());
    for (std::size_t r = 0; r < nbrs.size(); ++r)
      hood.row(static_cast<Eigen::Index>(r)) = rows.row(static_cast<Eigen::Index>(nbrs[r]));
    result.per_anchor[a] = local_score(hood, config.metric);
  });
  result.mean = std::accumulate(result.per_anchor.begin(), result.per_anchor.end(), 0.0) /
                static_cast<double>(result.per_anchor.size());
  return result;
}

std::vector<SweepCell> local_isotropy_sweep(const EmbeddingMatrix& embeddings, const std::vector<std::size_t>& ks,
                                            const std::vector<LocalMetric>& metrics, std::size_t n_anchors,
                                            std::uint64_t seed) {
  std::vector<SweepCell> cells;
  for (std::size_t k : ks) {
    for (LocalMetric m : metrics) {
      LocalIsotropyConfig cfg{.k = k, .n_anchors = n_anchors, .metric = m, .seed = seed};
      cells.push_back({k, m, local_isotropy(embeddings, cfg).mean});
    }
  }
  return cells;
}

}  // namespace sensorank::geometry
