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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "geometry/embedding.hpp"
#include "probegen/dataset.hpp"

namespace sensorank::readout {

enum class ReadoutKind { kCosine, kKnn, kLocalPca };
std::string_view readout_kind_name(ReadoutKind k) noexcept;
std::optional<ReadoutKind> parse_readout_kind(std::string_view name) noexcept;

struct TrialEmbeddings {
  Eigen::VectorXd query;
  std::array<Eigen::VectorXd, 4> candidates;
  int target_index = 0;
};

/// Result of one readout decision. `margin` is the target score minus the
/// best distractor score; `tie` is set when the top score is shared, in
/// which case the lowest index is selected.
struct Selection {
  int index = 0;
  bool tie = false;
  std::array<double, 4> scores{};
  double margin = 0.0;
};

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

Selection cosine_select(const TrialEmbeddings& trial);

/// Reference pool for neighborhood readouts. Rows are L2-normalized once;
/// all-zero rows stay zero (cosine similarity 0 to everything).
class NeighborPool {
 public:
  explicit NeighborPool(const geometry::RowMatrix& rows);

  std::size_t size() const noexcept { return static_cast<std::size_t>(unit_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(unit_.cols()); }

  /// Indices of the k pool rows with the smallest cosine distance to `v`,
  /// ties broken by lower index, sorted ascending by index.
  std::vector<std::size_t> nearest(const Eigen::VectorXd& v, std::size_t k) const;

  const geometry::RowMatrix& raw() const noexcept { return raw_; }

 private:
  geometry::RowMatrix raw_;
  geometry::RowMatrix unit_;
};

/// Shared-neighbor readout: scores each candidate by the Jaccard overlap of
/// its k-NN set with the query's k-NN set in the pool.
Selection knn_select(const TrialEmbeddings& trial, const NeighborPool& pool, std::size_t k = 60);

/// Orthonormal basis (D x r, columns by decreasing variance) of the top
/// principal directions of the query's pool neighborhood. r is
/// min(components, numerical rank); `rank_deficient` reports r < components.
struct LocalBasis {
  Eigen::MatrixXd basis;
  bool rank_deficient = false;
};
LocalBasis local_pca_basis(const Eigen::VectorXd& center, const NeighborPool& pool, std::size_t components,
                           std::size_t neighborhood);

/// Cosine readout after projecting query and candidates onto the local
/// PCA basis of the query's neighborhood (uncentered projection, so a
/// complete basis reproduces cosine_select). Candidates whose projection
/// vanishes score 0.
Selection localpca_select(const TrialEmbeddings& trial, const NeighborPool& pool, std::size_t components = 32,
                          std::size_t neighborhood = 50, bool* rank_deficient = nullptr);

/// Linear-interpolation percentile (0..100) of an ascending-sorted sample.
double percentile_sorted(const std::vector<double>& sorted, double pct);

struct ThresholdResult {
  double accuracy = 0.0;
  double threshold = 0.0;
};

/// Best in-sample accuracy of "same iff d < tau" over tau in the 21
/// percentiles 0, 5, ..., 100 of `distances`; lowest tau on ties.
ThresholdResult samediff_accuracy(const std::vector<double>& distances, const std::vector<bool>& is_same);

struct ReadoutConfig {
  ReadoutKind kind = ReadoutKind::kCosine;
  std::size_t knn_k = 60;
  std::size_t components = 32;
  std::size_t neighborhood = 50;
  /// External pool; defaults to every image embedding of the manifest.
  const geometry::EmbeddingMatrix* pool = nullptr;
};

struct TrialRecord {
  std::string id;
  std::string selected;  // candidate index (binding) or predicted label (samediff)
  bool correct = false;
  double margin = 0.0;
  bool tie = false;
};

struct ReadoutResult {
  std::string task;
  ReadoutKind kind = ReadoutKind::kCosine;
  double accuracy = 0.0;
  std::size_t n = 0;
  std::optional<double> threshold;
  std::vector<TrialRecord> per_trial;
  std::size_t tie_count = 0;
  std::vector<std::string> warnings;
};

/// Throws ManifestMismatch listing any manifest image id missing from `embeddings`.
ReadoutResult eval_binding(const probegen::DatasetManifest& manifest, const geometry::EmbeddingMatrix& embeddings,
                           const ReadoutConfig& config = {});

ReadoutResult eval_samediff(const probegen::DatasetManifest& manifest, const geometry::EmbeddingMatrix& embeddings,
                            const ReadoutConfig& config = {});

std::string result_to_json(const ReadoutResult& result);

}  // namespace sensorank::readout
