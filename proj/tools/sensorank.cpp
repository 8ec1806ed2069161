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

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sensorank/sensorank.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

const char* const kCommands[] = {"gen-probes", "embed", "metrics", "jer", "eval", "correlate", "report"};

const std::map<std::string, std::string> kDescriptions = {
    {"gen-probes", "Generate binding or same/different probe images and a manifest"},
    {"embed", "Embed manifest images with a builtin encoder or an adapter"},
    {"metrics", "Global and local embedding geometry"},
    {"jer", "Jacobian effective rank of an oracle"},
    {"eval", "Binding or same/different accuracy under a readout"},
    {"correlate", "Correlation, partial correlation, OLS/LOO and jackknife on records"},
    {"report", "Leaderboard, correlation table and plot data from results"},
};

struct Owned {
  char* p = nullptr;
  ~Owned() { sr_string_free(p); }
};

[[noreturn]] void die(sr_status status) {
  std::cerr << "sensorank: " << sr_status_name(status) << ": " << sr_last_error() << "\n";
  std::exit(status == SR_CONFIG ? kExitConfig : kExitData);
}

json command_options(const std::string& command) {
  Owned s;
  if (const auto st = sr_command_options(command.c_str(), &s.p); st != SR_OK) die(st);
  return json::parse(s.p);
}

std::string show_default(const json& v) {
  if (v.is_string()) return v.get<std::string>().empty() ? "none" : v.get<std::string>();
  if (v.is_array()) {
    if (v.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
    return out;
  }
  return v.dump();
}

std::string defaults_footer() {
  std::string out = "Defaults:\n";
  for (const char* c : kCommands) {
    out += "  " + std::string(c) + ":\n";
    for (const auto& o : command_options(c)) {
      if (o["section"] == "encoder" && std::string(c) != "embed") continue;
      std::string line = "    " + o["flag"].get<std::string>() + " " + show_default(o["default"]);
      if (!o["label"].get<std::string>().empty()) line += "  (" + o["label"].get<std::string>() + ")";
      out += line + "\n";
    }
  }
  Owned fixed;
  if (const auto st = sr_fixed_parameters(&fixed.p); st != SR_OK) die(st);
  return out + "\n" + fixed.p;
}

struct Bound {
  json spec;
  CLI::Option* option = nullptr;
  std::string scalar;
  std::vector<std::string> list;
  bool flag = false;
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::vector<std::unique_ptr<Bound>> bound;
};

void bind_options(Subcommand& sub, const std::string& command) {
  sub.app->add_option("--config", sub.config_path, "run-config file (TOML subset); flags take precedence");
  for (const auto& o : command_options(command)) {
    auto b = std::make_unique<Bound>();
    b->spec = o;
    const std::string flag = o["flag"];
    const std::string type = o["type"];
    std::string help = o["help"].get<std::string>() + " (default: " + show_default(o["default"]) + ")";
    if (type == "bool") {
      b->option = sub.app->add_flag(flag, b->flag, help);
    } else if (type.size() > 5 && type.substr(type.size() - 5) == "_list") {
      b->option = sub.app->add_option(flag, b->list, help)->delimiter(',');
    } else {
      b->option = sub.app->add_option(flag, b->scalar, help);
    }
    sub.bound.push_back(std::move(b));
  }
  Owned fixed;
  if (const auto st = sr_fixed_parameters(&fixed.p); st != SR_OK) die(st);
  sub.app->footer(fixed.p);
}

json collect_flags(const Subcommand& sub) {
  json flags = json::object();
  for (const auto& b : sub.bound) {
    if (b->option->count() == 0) continue;
    const std::string section = b->spec["section"];
    const std::string key = b->spec["key"];
    if (b->spec["type"] == "bool") {
      flags[section][key] = b->flag;
    } else if (!b->list.empty() || b->spec["type"].get<std::string>().find("_list") != std::string::npos) {
      flags[section][key] = b->list;
    } else {
      flags[section][key] = b->scalar;
    }
  }
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensorank: binding diagnostics for vision encoders"};
  app.set_version_flag("--version", std::string(sr_version()));
  app.require_subcommand(1);
  app.footer(defaults_footer());

  std::vector<std::unique_ptr<Subcommand>> subs;
  for (const char* c : kCommands) {
    auto s = std::make_unique<Subcommand>();
    s->app = app.add_subcommand(c, kDescriptions.at(c));
    bind_options(*s, c);
    subs.push_back(std::move(s));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->app->parsed()) continue;
    const std::string command = kCommands[i];
    std::string config_json;
    if (!subs[i]->config_path.empty()) {
      Owned cfg;
      if (const auto st = sr_config_load(subs[i]->config_path.c_str(), &cfg.p); st != SR_OK) die(st);
      config_json = cfg.p;
    }
    const std::string flags_json = collect_flags(*subs[i]).dump();
    Owned result;
    const auto st = sr_command_run(command.c_str(), config_json.empty() ? nullptr : config_json.c_str(),
                                   flags_json.c_str(), &result.p);
    if (st != SR_OK) die(st);
    std::cout << result.p << "\n";
    return 0;
  }
  return kExitConfig;
}
