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

#include <algorithm>
#include <sstream>

#include "common/error.hpp"
#include "pipeline/commands.hpp"
#include "pipeline/options.hpp"
#include "stats/correlation.hpp"
#include "stats/records.hpp"

namespace fs = std::filesystem;

namespace sensorank::pipeline {
namespace {

struct SeriesPoint {
  std::string model;
  std::size_t index = 0;
  std::string tap;
  double value = 0.0;
};

struct ReportData {
  std::vector<stats::ModelRecord> rows;
  std::vector<stats::ModelRecord> covariate_rows;
  std::vector<SeriesPoint> spectrum;
  std::vector<SeriesPoint> profile;
  std::vector<std::string> warnings;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

stats::ModelRecord& row_for(ReportData& d, const std::string& model, const std::string& arch = "",
                            const std::string& objective = "") {
  for (auto& r : d.rows)
    if (r.name == model && r.architecture == arch) return r;
  d.rows.push_back({model, arch, objective, {}, {}});
  return d.rows.back();
}

void absorb_result(ReportData& d, const Json& j, const std::string& file) {
  const std::string command = j.value("command", "");
  if (command == "report") {
    for (const auto& row : j.at("rows")) {
      auto& r = row_for(d, row.at("model"), row.value("arch", ""), row.value("objective", ""));
      for (const auto& [k, v] : row.at("metrics").items()) r.metrics[k] = v.get<double>();
      if (row.contains("covariates"))
        for (const auto& [k, v] : row.at("covariates").items()) r.covariates[k] = v.get<double>();
    }
    for (const auto& p : j.value("spectrum", Json::array()))
      d.spectrum.push_back({p.at("model"), p.at("sv_index"), "", p.at("sigma_normalized")});
    for (const auto& p : j.value("depth_profile", Json::array()))
      d.profile.push_back({p.at("model"), p.at("layer_index"), p.at("tap"), p.at("jer")});
    return;
  }
  require(j.contains("model"), ErrorCode::kFormat, file + ": result has no model field");
  const std::string model = j.at("model");
  auto& r = row_for(d, model);
  if (command == "metrics") {
    for (const char* k : {"g_pr", "g_iso", "l_iso"}) r.metrics[k] = j.at(k).get<double>();
  } else if (command == "jer") {
    r.metrics["jer"] = j.at("jer").get<double>();
    const auto spec = j.value("spectrum_normalized_mean", std::vector<double>{});
    for (std::size_t i = 0; i < spec.size(); ++i) d.spectrum.push_back({model, i, "", spec[i]});
    for (const auto& p : j.value("depth_profile", Json::array()))
      d.profile.push_back({model, p.at("layer_index"), p.at("tap"), p.at("jer")});
  } else if (command == "eval") {
    const std::string task = j.at("task");
    r.metrics[task == "binding" ? "binding" : "disc"] = 100.0 * j.at("accuracy").get<double>();
  } else {
    fail(ErrorCode::kFormat, file + ": '" + command + "' results cannot be reported");
  }
}

Json correlation_rows(const ReportData& d, double alpha, std::vector<std::string>& warnings) {
  struct Spec {
    const char* category;
    const char* label;
    std::vector<std::string> xs;
  };
  const Spec specs[] = {
      {"Geometry", "G.PR", {"g_pr"}},   {"Geometry", "G.Iso", {"g_iso"}},           {"Geometry", "L.Iso", {"l_iso"}},
      {"Functional", "JER", {"jer"}},   {"Functional", "JER + Disc.", {"jer", "disc"}},
  };
  Json out = Json::array();
  for (const auto& s : specs) {
    std::vector<stats::ModelRecord> rows;
    for (const auto& r : d.rows) {
      bool ok = r.metrics.count("binding") > 0;
      for (const auto& x : s.xs) ok = ok && r.metrics.count(x) > 0;
      if (ok) rows.push_back(r);
    }
    Json row{{"category", s.category}, {"metric", s.label}, {"n", rows.size()}};
    try {
      const auto y = stats::column(rows, "binding");
      std::vector<std::vector<double>> cols;
      for (const auto& x : s.xs) cols.push_back(stats::column(rows, x));
      if (s.xs.size() == 1) {
        const auto pr = stats::pearson(cols[0], y);
        row["r"] = pr.r;
        row["p"] = pr.p;
        row["significant"] = pr.p < alpha;
      }
      if (std::string(s.label) == "JER" || s.xs.size() > 1) row["r2"] = stats::ols_r2(cols, y).r2;
      if (s.xs.size() > 1) row["r2_loo"] = stats::loo_cv_r2(cols, y);
    } catch (const Error& e) {
      warnings.push_back(std::string(s.label) + ": " + e.what());
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string correlations_csv(const Json& rows) {
  std::string out = "category,metric,r,p,r2,r2_loo,n\n";
  auto cell = [](const Json& row, const char* k) { return row.contains(k) ? num(row[k].get<double>()) : ""; };
  for (const auto& row : rows)
    out += row["category"].get<std::string>() + "," + row["metric"].get<std::string>() + "," + cell(row, "r") + "," +
           cell(row, "p") + "," + cell(row, "r2") + "," + cell(row, "r2_loo") + "," + std::to_string(row["n"].get<std::size_t>()) +
           "\n";
  return out;
}

}  // namespace

Json cmd_report(const Json& resolved) {
  const auto& o = resolved.at("report");
  const auto inputs = o.at("inputs").get<std::vector<std::string>>();
  if (inputs.empty()) fail(ErrorCode::kConfig, "report needs at least one input (--inputs)");
  const double alpha = o.at("alpha").get<double>();

  ReportData d;
  std::vector<std::pair<std::string, Json>> results;
  std::vector<std::string> mismatched;
  for (const auto& in : inputs) {
    if (fs::path(in).extension() == ".csv") {
      auto recs = stats::load_records(in);
      const bool has_metrics = std::any_of(recs.begin(), recs.end(), [](const auto& r) { return !r.metrics.empty(); });
      auto& target = has_metrics ? d.rows : d.covariate_rows;
      target.insert(target.end(), recs.begin(), recs.end());
      continue;
    }
    Json j;
    try {
      j = Json::parse(read_text(in));
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::kFormat, in + ": not valid JSON: " + e.what());
    }
    const std::string version = j.is_object() ? j.value("tool_version", "") : "";
    if (version != kToolVersion) mismatched.push_back(in + " (" + (version.empty() ? "no version" : version) + ")");
    results.emplace_back(in, std::move(j));
  }
  if (!mismatched.empty()) {
    std::string msg = "inputs were written by a different tool version than " + std::string(kToolVersion) + ":";
    for (const auto& m : mismatched) msg += " " + m;
    fail(ErrorCode::kVersionMismatch, msg);
  }
  for (const auto& [file, j] : results) absorb_result(d, j, file);
  if (!d.covariate_rows.empty()) {
    for (auto& r : d.rows)
      for (const auto& c : d.covariate_rows)
        if (c.name == r.name && c.architecture == r.architecture)
          for (const auto& [k, v] : c.covariates) r.covariates[k] = v;
  }

  std::stable_sort(d.rows.begin(), d.rows.end(), [](const auto& a, const auto& b) {
    const auto ia = a.metrics.find("binding");
    const auto ib = b.metrics.find("binding");
    if (ia == a.metrics.end()) return false;
    if (ib == b.metrics.end()) return true;
    return ia->second > ib->second;
  });

  const Json corr = correlation_rows(d, alpha, d.warnings);
  const fs::path out = o.at("out").get<std::string>();
  std::error_code ec;
  fs::create_directories(out, ec);
  require(!ec, ErrorCode::kIo, "cannot create output directory '" + out.string() + "'");

  write_text(out / "leaderboard.csv", stats::records_to_csv(d.rows));
  write_text(out / "correlations.csv", correlations_csv(corr));
  std::string spectrum = "model,sv_index,sigma_normalized\n";
  for (const auto& p : d.spectrum) spectrum += p.model + "," + std::to_string(p.index) + "," + num(p.value) + "\n";
  write_text(out / "spectrum.csv", spectrum);
  std::string profile = "model,layer_index,tap,jer\n";
  for (const auto& p : d.profile)
    profile += p.model + "," + std::to_string(p.index) + "," + p.tap + "," + num(p.value) + "\n";
  write_text(out / "depth_profile.csv", profile);

  const std::string echo = echo_config("report", resolved);
  Json r;
  r["tool_version"] = kToolVersion;
  r["command"] = "report";
  r["config_hash"] = config_hash(echo);
  r["inputs"] = inputs;
  Json rows = Json::array();
  for (const auto& row : d.rows) {
    Json jr{{"model", row.name}, {"arch", row.architecture}, {"objective", row.objective}};
    jr["metrics"] = Json(row.metrics);
    if (!row.covariates.empty()) jr["covariates"] = Json(row.covariates);
    rows.push_back(std::move(jr));
  }
  r["rows"] = std::move(rows);
  r["correlations"] = corr;
  Json spec = Json::array();
  for (const auto& p : d.spectrum) spec.push_back({{"model", p.model}, {"sv_index", p.index}, {"sigma_normalized", p.value}});
  r["spectrum"] = std::move(spec);
  Json prof = Json::array();
  for (const auto& p : d.profile)
    prof.push_back({{"model", p.model}, {"layer_index", p.index}, {"tap", p.tap}, {"jer", p.value}});
  r["depth_profile"] = std::move(prof);
  r["warnings"] = d.warnings;
  write_text(out / "report.json", r.dump(2) + "\n");
  write_text(out / "resolved_config.toml", echo);

  Json summary = r;
  summary.erase("spectrum");
  summary.erase("depth_profile");
  return summary;
}

}  // namespace sensorank::pipeline
