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

#include "stats/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace sensorank::stats {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool is_metric(const std::string& key) {
  return std::find(std::begin(kMetricKeys), std::end(kMetricKeys), key) != std::end(kMetricKeys);
}

std::string format_value(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::vector<ModelRecord> parse_records(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) header = split_csv(line);
  require(header.size() >= 3 && header[0] == "model" && header[1] == "arch", ErrorCode::kFormat,
          source + ": header must start with model,arch");

  std::vector<ModelRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    require(cells.size() == header.size(), ErrorCode::kFormat,
            source + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " fields");
    ModelRecord r;
    r.name = cells[0];
    r.architecture = cells[1];
    for (std::size_t c = 2; c < header.size(); ++c) {
      if (header[c] == "objective") {
        r.objective = cells[c];
        continue;
      }
      if (cells[c].empty()) continue;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      require(ec == std::errc() && ptr == cells[c].data() + cells[c].size() && std::isfinite(v), ErrorCode::kFormat,
              source + ":" + std::to_string(line_no) + ": column '" + header[c] + "' is not a finite number");
      (is_metric(header[c]) ? r.metrics : r.covariates)[header[c]] = v;
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ModelRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open records file " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_records(s.str(), path.string());
}

void join_covariates(std::vector<ModelRecord>& records, const std::vector<ModelRecord>& extra) {
  for (auto& r : records) {
    const auto it = std::find_if(extra.begin(), extra.end(), [&](const ModelRecord& e) {
      return e.name == r.name && e.architecture == r.architecture;
    });
    require(it != extra.end(), ErrorCode::kInvalidArgument,
            "no covariate row for " + r.name + " " + r.architecture);
    for (const auto& [k, v] : it->covariates) r.covariates[k] = v;
    for (const auto& [k, v] : it->metrics) r.metrics.try_emplace(k, v);
  }
}

std::vector<double> column(const std::vector<ModelRecord>& records, const std::string& key) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = r.metrics.find(key);
    if (it == r.metrics.end()) {
      it = r.covariates.find(key);
      require(it != r.covariates.end(), ErrorCode::kInvalidArgument,
              "record " + r.name + " " + r.architecture + " has no value for '" + key + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

std::string records_to_csv(const std::vector<ModelRecord>& records) {
  std::string out = "model,arch,objective";
  for (const char* k : kMetricKeys) out += std::string(",") + k;
  out += "\n";
  for (const auto& r : records) {
    out += r.name + "," + r.architecture + "," + r.objective;
    for (const char* k : kMetricKeys) {
      const auto it = r.metrics.find(k);
      out += ",";
      if (it != r.metrics.end()) out += format_value(it->second);
    }
    out += "\n";
  }
  return out;
}

}  // namespace sensorank::stats
