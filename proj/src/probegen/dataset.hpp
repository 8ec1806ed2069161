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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "probegen/scene.hpp"

namespace sensorank::probegen {

inline constexpr std::string_view kGeneratorVersion = "sensorank-probegen/1";

enum class DatasetKind { kBinding, kSameDiff };

std::string_view dataset_kind_name(DatasetKind kind) noexcept;
std::optional<DatasetKind> parse_dataset_kind(std::string_view name) noexcept;

/// One trial (binding) or pair (samediff). `images` are paths relative to
/// the manifest directory; `image_ids` are the matching embedding row ids.
/// Binding entries list the query first, then the four candidates.
struct ManifestEntry {
  std::string id;
  std::vector<std::string> image_ids;
  std::vector<std::string> images;
  std::vector<SceneSpec> scenes;
  std::optional<int> target_index;
  std::optional<SameDiffLabel> label;
  std::vector<std::string> kinds;
};

struct DatasetManifest {
  DatasetKind kind = DatasetKind::kBinding;
  std::uint64_t seed = 0;
  std::string generator_version{kGeneratorVersion};
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;  // not serialized
};

/// Symbolic manifest only, no images written.
DatasetManifest build_manifest(DatasetKind kind, std::size_t n, std::uint64_t seed);

/// Generates `n` entries under `out_dir`: PNGs in out_dir/images and
/// out_dir/manifest.json. Regeneration with the same arguments is
/// byte-identical.
DatasetManifest gen_dataset(DatasetKind kind, std::size_t n, std::uint64_t seed,
                            const std::filesystem::path& out_dir);

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(std::string_view text, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace sensorank::probegen
