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

#include <string>
#include <vector>

#include "pipeline/config.hpp"

namespace sensorank::pipeline {

enum class OptionType { kUint, kFloat, kString, kBool, kUintList, kFloatList, kStringList };

struct OptionSpec {
  std::string section;
  std::string key;
  OptionType type;
  Json default_value;
  std::string help;
  /// Parameter label echoed next to the resolved value, e.g. "Neighborhood size k".
  std::string label;
};

inline constexpr const char* kCommands[] = {"gen-probes", "embed", "metrics", "jer", "eval", "correlate", "report"};

/// Config-file section that holds a command's keys ("gen-probes" -> "gen_probes").
std::string section_for(const std::string& command);

/// Option table of a command, including the shared [encoder] block where
/// it applies. Throws Config for an unknown command.
std::vector<OptionSpec> command_options(const std::string& command);

/// Command-line flag for an option: --local-k, --encoder-widths, ...
std::string flag_name(const OptionSpec& spec);

/// Fixed constants that are not configurable but shown in help output.
std::string fixed_parameters_text();

/// Defaults -> SENSORANK_SEED (for `seed` keys) -> config file -> flags.
/// `file` is a parsed config document; `flags` maps section -> key ->
/// string or array of strings, coerced by option type. Unknown sections or
/// keys in either source raise Config. Result: {section: {key: value}}.
Json resolve_options(const std::string& command, const Json& file, const Json& flags);

/// TOML echo of a resolved document with labelled comment lines.
std::string echo_config(const std::string& command, const Json& resolved);

/// Hex FNV-1a 64 of the echo text.
std::string config_hash(const std::string& echo);

}  // namespace sensorank::pipeline
