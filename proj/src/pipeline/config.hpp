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
#include <string_view>

#include <nlohmann/json.hpp>

namespace sensorank::pipeline {

using Json = nlohmann::ordered_json;

/// Parses the run-config format: `[section]` headers and `key = value`
/// lines, where a value is an integer, float, boolean, quoted string or a
/// single-line array of those. `#` starts a comment. Keys before the first
/// section land in the root object. Throws Config with the line number.
Json parse_config(std::string_view text, const std::string& source = "<config>");
Json load_config(const std::filesystem::path& path);

/// Formats one scalar or array value in the same syntax.
std::string format_value(const Json& value);

}  // namespace sensorank::pipeline
