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
#include <memory>
#include <string>

#include "jacobian/oracle.hpp"
#include "pipeline/config.hpp"
#include "toyenc/factory.hpp"

namespace sensorank::pipeline {

inline constexpr const char* kToolVersion = SENSORANK_VERSION;

/// Runs a subcommand on a document produced by resolve_options. Writes the
/// command outputs plus the resolved-config echo and returns the result.
Json run_command(const std::string& command, const Json& resolved);

Json cmd_gen_probes(const Json& resolved);
Json cmd_embed(const Json& resolved);
Json cmd_metrics(const Json& resolved);
Json cmd_jer(const Json& resolved);
Json cmd_eval(const Json& resolved);
Json cmd_correlate(const Json& resolved);
Json cmd_report(const Json& resolved);

/// Encoder block plus an optional kind override from "builtin:KIND".
toyenc::EncoderSpec encoder_spec(const Json& encoder, const std::string& kind_override = "");

/// "builtin", "builtin:KIND" or "adapter:CMD". Bag kinds are rejected.
std::unique_ptr<jacobian::JvpOracle> open_oracle(const std::string& spec, const Json& encoder);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sensorank::pipeline
