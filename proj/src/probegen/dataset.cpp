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

#include "probegen/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "probegen/png_io.hpp"
#include "probegen/render.hpp"
#include "probegen/trials.hpp"

namespace sensorank::probegen {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kDistractorColorNote =
    "shape_swap: target colors per slot; shape_swap2: the two colors unused by query and target; "
    "partial_match: target colors";

std::string pad_index(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%06zu", i);
  return buf;
}

json scene_to_json(const SceneSpec& s) {
  return json{{"left", {{"shape", shape_name(s.left.shape)}, {"color", color_name(s.left.color)}}},
              {"right", {{"shape", shape_name(s.right.shape)}, {"color", color_name(s.right.color)}}}};
}

Slot slot_from_json(const json& j) {
  const auto shape = parse_shape(j.at("shape").get<std::string>());
  const auto color = parse_color(j.at("color").get<std::string>());
  require(shape && color, ErrorCode::kFormat, "manifest: unknown shape or color in scene");
  return {*shape, *color};
}

SceneSpec scene_from_json(const json& j) { return {slot_from_json(j.at("left")), slot_from_json(j.at("right"))}; }

void add_image(ManifestEntry& e, const std::string& id, const SceneSpec& scene) {
  e.image_ids.push_back(id);
  e.images.push_back("images/" + id + ".png");
  e.scenes.push_back(scene);
}

ManifestEntry binding_entry(std::uint64_t seed, std::size_t i) {
  Pcg32 rng = Pcg32::stream(seed, StreamDomain::kBindingTrial, i);
  const BindingTrial trial = gen_binding_trial(rng);
  ManifestEntry e;
  e.id = "b" + pad_index(i);
  add_image(e, e.id + "_q", trial.query);
  for (int c = 0; c < 4; ++c) {
    add_image(e, e.id + "_c" + std::to_string(c), trial.candidates[c]);
    e.kinds.emplace_back(candidate_kind_name(trial.kinds[c]));
  }
  e.target_index = trial.target_index;
  return e;
}

ManifestEntry samediff_entry(std::uint64_t seed, std::size_t i) {
  Pcg32 rng = Pcg32::stream(seed, StreamDomain::kSameDiffPair, i);
  const SameDiffPair pair = gen_samediff_pair(rng, samediff_label_for(i));
  ManifestEntry e;
  e.id = "s" + pad_index(i);
  add_image(e, e.id + "_a", pair.image_a);
  add_image(e, e.id + "_b", pair.image_b);
  e.label = pair.label;
  if (pair.different_kind)
    e.kinds.emplace_back(*pair.different_kind == DifferentKind::kShapeSwap ? "shape_swap" : "shape_change");
  return e;
}

}  // namespace

std::string_view dataset_kind_name(DatasetKind kind) noexcept {
  return kind == DatasetKind::kBinding ? "binding" : "samediff";
}

std::optional<DatasetKind> parse_dataset_kind(std::string_view name) noexcept {
  if (name == "binding") return DatasetKind::kBinding;
  if (name == "samediff") return DatasetKind::kSameDiff;
  return std::nullopt;
}

DatasetManifest build_manifest(DatasetKind kind, std::size_t n, std::uint64_t seed) {
  require(n >= 1, ErrorCode::kInvalidArgument, "dataset size must be at least 1");
  DatasetManifest m;
  m.kind = kind;
  m.seed = seed;
  m.entries.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    m.entries[i] = kind == DatasetKind::kBinding ? binding_entry(seed, i) : samediff_entry(seed, i);
  return m;
}

DatasetManifest gen_dataset(DatasetKind kind, std::size_t n, std::uint64_t seed,
                            const std::filesystem::path& out_dir) {
  DatasetManifest m = build_manifest(kind, n, seed);
  m.base_dir = out_dir;

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "images", ec);
  require(!ec, ErrorCode::kIo, "dataset generation failed: cannot create '" + (out_dir / "images").string() + "'");

  parallel_for(m.entries.size(), true, [&](std::size_t i) {
    const ManifestEntry& e = m.entries[i];
    for (std::size_t k = 0; k < e.images.size(); ++k) {
      const auto path = out_dir / e.images[k];
      try {
        write_png(path, render_scene(e.scenes[k]));
      } catch (const Error& err) {
        fail(ErrorCode::kIo, "dataset generation failed at '" + path.string() + "': " + err.what());
      }
    }
  });

  const auto manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  out << manifest_to_json(m);
  require(static_cast<bool>(out.flush()), ErrorCode::kIo,
          "dataset generation failed: cannot write '" + manifest_path.string() + "'");
  return m;
}

std::string manifest_to_json(const DatasetManifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries) {
    json j{{"id", e.id}, {"images", e.images}};
    json scenes = json::array();
    for (const auto& s : e.scenes) scenes.push_back(scene_to_json(s));
    j["scenes"] = std::move(scenes);
    if (e.target_index) j["target_index"] = *e.target_index;
    if (e.label) j["label"] = *e.label == SameDiffLabel::kSame ? "same" : "different";
    if (!e.kinds.empty()) j["kinds"] = e.kinds;
    entries.push_back(std::move(j));
  }
  json doc{{"kind", dataset_kind_name(m.kind)},
           {"seed", m.seed},
           {"generator_version", m.generator_version}};
  if (m.kind == DatasetKind::kBinding) doc["distractor_colors"] = kDistractorColorNote;
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

DatasetManifest manifest_from_json(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kFormat, std::string("manifest is not valid JSON: ") + e.what());
  }
  DatasetManifest m;
  m.base_dir = base_dir;
  try {
    const auto kind = parse_dataset_kind(doc.at("kind").get<std::string>());
    require(kind.has_value(), ErrorCode::kFormat, "manifest: unknown kind");
    m.kind = *kind;
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.generator_version = doc.at("generator_version").get<std::string>();
    for (const auto& j : doc.at("entries")) {
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.images = j.at("images").get<std::vector<std::string>>();
      for (const auto& p : e.images) e.image_ids.push_back(std::filesystem::path(p).stem().string());
      if (j.contains("scenes"))
        for (const auto& s : j.at("scenes")) e.scenes.push_back(scene_from_json(s));
      if (j.contains("target_index")) e.target_index = j.at("target_index").get<int>();
      if (j.contains("label")) {
        const auto label = j.at("label").get<std::string>();
        require(label == "same" || label == "different", ErrorCode::kFormat, "manifest: bad label '" + label + "'");
        e.label = label == "same" ? SameDiffLabel::kSame : SameDiffLabel::kDifferent;
      }
      if (j.contains("kinds")) e.kinds = j.at("kinds").get<std::vector<std::string>>();
      if (m.kind == DatasetKind::kBinding) {
        require(e.images.size() == 5 && e.target_index && *e.target_index >= 0 && *e.target_index < 4,
                ErrorCode::kFormat, "manifest: binding entry '" + e.id + "' is malformed");
      } else {
        require(e.images.size() == 2 && e.label, ErrorCode::kFormat,
                "manifest: samediff entry '" + e.id + "' is malformed");
      }
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("manifest schema error: ") + e.what());
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open manifest '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str(), path.parent_path());
}

}  // namespace sensorank::probegen
