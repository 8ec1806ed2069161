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
#include <map>
#include <string>
#include <vector>

namespace sensorank::stats {

inline constexpr const char* kMetricKeys[] = {"g_pr", "g_iso", "l_iso", "jer", "disc", "binding"};

struct ModelRecord {
  std::string name;
  std::string architecture;
  std::string objective;
  std::map<std::string, double> metrics;
  std::map<std::string, double> covariates;
};

/// Reads a records CSV with header `model,arch[,objective],<numeric columns>`.
/// Metric keys go to `metrics`, any other numeric column to `covariates`.
std::vector<ModelRecord> load_records(const std::filesystem::path& path);
std::vector<ModelRecord> parse_records(const std::string& text, const std::string& source = "<records>");

/// Adds the covariates of `extra` to matching (model, arch) rows. Every
/// record must find a match.
void join_covariates(std::vector<ModelRecord>& records, const std::vector<ModelRecord>& extra);

/// Values of a metric or covariate across records, in order. Throws
/// InvalidArgument naming the first record that lacks it.
std::vector<double> column(const std::vector<ModelRecord>& records, const std::string& key);

/// Leaderboard CSV in the fixture column order.
std::string records_to_csv(const std::vector<ModelRecord>& records);

}  // namespace sensorank::stats
