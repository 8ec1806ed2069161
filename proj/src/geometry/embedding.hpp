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

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace sensorank::geometry {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N x D embeddings with one identifier per row. Values are finite, N >= 2
/// and D >= 1 (checked by `validate`).
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(RowMatrix values, std::vector<std::string> ids);

  /// Ids default to "0", "1", ...
  explicit EmbeddingMatrix(RowMatrix values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const RowMatrix& values() const noexcept { return values_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Row index for an id, or -1.
  std::ptrdiff_t find(const std::string& id) const;

  /// Throws InvalidArgument unless N >= min_rows, D >= 1 and all values finite.
  void validate(std::size_t min_rows = 2) const;

 private:
  void build_index();

  RowMatrix values_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::ptrdiff_t> index_;
};

/// EMB1: "EMB1", u32 N, u32 D (little-endian), N*D f32 row-major, then a
/// JSON trailer {"ids": [...]} running to end of file.
void write_emb1(const std::filesystem::path& path, const EmbeddingMatrix& embeddings);
EmbeddingMatrix read_emb1(const std::filesystem::path& path);

/// CSV with header `id,dim0,...,dim{D-1}`.
EmbeddingMatrix read_embeddings_csv(const std::filesystem::path& path);

/// Dispatches on the leading magic bytes: EMB1 or CSV.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

}  // namespace sensorank::geometry
