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

#include "pipeline/options.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <optional>
#include <set>

#include "common/error.hpp"

namespace sensorank::pipeline {
namespace {

using T = OptionType;

std::vector<OptionSpec> encoder_options() {
  return {
      {"encoder", "kind", T::kString, "mlp", "builtin encoder: linear|mlp|bag_factored|bag_joint", ""},
      {"encoder", "seed", T::kUint, 42, "weight seed of the builtin encoder", ""},
      {"encoder", "widths", T::kUintList, Json::array({64, 64, 32}), "MLP layer widths", ""},
      {"encoder", "activation", T::kString, "tanh", "MLP activation: tanh|gelu|relu|identity", ""},
      {"encoder", "input_shape", T::kUintList, Json::array({3, 16, 16}), "builtin input shape C H W", ""},
      {"encoder", "scale", T::kFloat, 1.0, "linear encoder scale (identity map when output_dim is 0)", ""},
      {"encoder", "output_dim", T::kUint, 0, "linear encoder output dim (0 = scaled identity)", ""},
      {"encoder", "bag_dim", T::kUint, 64, "bag-of-features embedding dim", ""},
  };
}

std::vector<OptionSpec> base_options(const std::string& command) {
  if (command == "gen-probes")
    return {
        {"gen_probes", "kind", T::kString, "binding", "probe kind: binding|samediff", "Task"},
        {"gen_probes", "n", T::kUint, 500, "number of trials or pairs", "Samples"},
        {"gen_probes", "seed", T::kUint, 42, "generation seed", "Seed"},
        {"gen_probes", "out", T::kString, "probes", "output directory", ""},
    };
  if (command == "embed")
    return {
        {"embed", "manifest", T::kString, "", "manifest.json from gen-probes", ""},
        {"embed", "oracle", T::kString, "builtin:mlp", "builtin[:KIND] or adapter:CMD", ""},
        {"embed", "out", T::kString, "embeddings.emb", "output EMB1 file", ""},
        {"embed", "resize", T::kUint, 256, "square resize before cropping (bilinear)", "Resize"},
        {"embed", "crop", T::kUint, 224, "center crop size", "Center crop"},
    };
  if (command == "metrics")
    return {
        {"metrics", "embeddings", T::kString, "", "EMB1 or CSV embeddings", ""},
        {"metrics", "local_k", T::kUint, 16, "local neighborhood size", "Neighborhood size k"},
        {"metrics", "anchors", T::kUint, 500, "anchor samples for local isotropy", "Anchor samples"},
        {"metrics", "formulation", T::kString, "variance",
         "local metric: variance (1 - l1/sum l)|effective_rank|participation_ratio", "Metric"},
        {"metrics", "global_samples", T::kUint, 1000, "rows used for global PR/Iso (0 = all)", "Global samples"},
        {"metrics", "seed", T::kUint, 42, "anchor and subsample seed", "Seed"},
        {"metrics", "include_anchor", T::kBool, false, "count the anchor in its own neighborhood", ""},
        {"metrics", "sweep", T::kBool, false, "also run the k x formulation robustness grid", ""},
        {"metrics", "sweep_k", T::kUintList, Json::array({8, 16, 32}), "neighborhood sizes of the sweep",
         "Robustness k"},
        {"metrics", "model", T::kString, "", "model label for reports (default: file stem)", ""},
        {"metrics", "out", T::kString, "sensorank-metrics", "output directory", ""},
    };
  if (command == "jer")
    return {
        {"jer", "oracle", T::kString, "builtin:mlp", "builtin[:KIND] or adapter:CMD", ""},
        {"jer", "images", T::kUint, 100, "probe images", "Number of images"},
        {"jer", "k", T::kUint, 32, "random orthonormal directions per image", "Input perturbation directions"},
        {"jer", "seed", T::kUint, 42, "probe seed", "Random seed"},
        {"jer", "shared_directions", T::kBool, false, "reuse one direction set for all images", ""},
        {"jer", "depth_profile", T::kBool, false, "JER at every tap of the oracle", ""},
        {"jer", "spectrum_out", T::kString, "", "per-image singular values CSV", ""},
        {"jer", "seeds", T::kUintList, Json::array(), "seed-stability run over these probe seeds", ""},
        {"jer", "model", T::kString, "", "model label for reports (default: oracle spec)", ""},
        {"jer", "out", T::kString, "sensorank-jer", "output directory", ""},
    };
  if (command == "eval")
    return {
        {"eval", "task", T::kString, "binding", "binding|samediff", ""},
        {"eval", "manifest", T::kString, "", "manifest.json from gen-probes", ""},
        {"eval", "embeddings", T::kString, "", "EMB1 or CSV embeddings of the manifest images", ""},
        {"eval", "readout", T::kString, "cosine", "cosine|knn|localpca", "Readout"},
        {"eval", "k", T::kUint, 60, "kNN neighbors (cosine distance)", "kNN k"},
        {"eval", "components", T::kUint, 32, "local PCA components", "Local PCA components"},
        {"eval", "neighborhood", T::kUint, 50, "local PCA nearest neighbors", "Local PCA neighborhood"},
        {"eval", "pool", T::kString, "", "reference pool embeddings (default: all manifest images)", ""},
        {"eval", "model", T::kString, "", "model label for reports (default: file stem)", ""},
        {"eval", "out", T::kString, "sensorank-eval", "output directory", ""},
    };
  if (command == "correlate")
    return {
        {"correlate", "records", T::kString, "", "records CSV (model,arch,...)", ""},
        {"correlate", "dims", T::kString, "", "covariate CSV joined on model,arch", ""},
        {"correlate", "x", T::kStringList, Json::array({"jer"}), "predictor column(s); r uses the first", ""},
        {"correlate", "y", T::kString, "binding", "response column", ""},
        {"correlate", "control", T::kString, "", "covariate for partial correlation", ""},
        {"correlate", "loo", T::kBool, false, "OLS and leave-one-out R^2 on all predictors", ""},
        {"correlate", "jackknife", T::kBool, false, "leave-one-out significance count", ""},
        {"correlate", "alpha", T::kFloat, 0.05, "significance threshold", "Significance threshold"},
        {"correlate", "out", T::kString, "sensorank-correlate", "output directory", ""},
    };
  if (command == "report")
    return {
        {"report", "inputs", T::kStringList, Json::array(), "result JSONs, report.json or records CSVs", ""},
        {"report", "alpha", T::kFloat, 0.05, "significance threshold", "Significance threshold"},
        {"report", "out", T::kString, "sensorank-report", "output directory", ""},
    };
  fail(ErrorCode::kConfig, "unknown command '" + command + "'");
}

bool uses_encoder(const std::string& command) { return command == "embed" || command == "jer"; }

std::set<std::string> all_sections() {
  std::set<std::string> out{"encoder"};
  for (const char* c : kCommands) out.insert(section_for(c));
  return out;
}

const OptionSpec* find_spec(const std::vector<OptionSpec>& specs, const std::string& section, const std::string& key) {
  for (const auto& s : specs)
    if (s.section == section && s.key == key) return &s;
  return nullptr;
}

[[noreturn]] void bad_value(const std::string& where, const std::string& what) {
  fail(ErrorCode::kConfig, where + ": " + what);
}

std::string type_name(OptionType t) {
  switch (t) {
    case T::kUint: return "a non-negative integer";
    case T::kFloat: return "a number";
    case T::kString: return "a string";
    case T::kBool: return "a boolean";
    case T::kUintList: return "a list of non-negative integers";
    case T::kFloatList: return "a list of numbers";
    case T::kStringList: return "a list of strings";
  }
  return "?";
}

Json coerce_scalar(OptionType t, const Json& v, const std::string& where) {
  switch (t) {
    case T::kUint:
    case T::kUintList:
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
      break;
    case T::kFloat:
    case T::kFloatList:
      if (v.is_number()) return v.get<double>();
      break;
    case T::kString:
    case T::kStringList:
      if (v.is_string()) return v;
      break;
    case T::kBool:
      if (v.is_boolean()) return v;
      break;
  }
  bad_value(where, "expected " + type_name(t));
}

bool is_list(OptionType t) { return t == T::kUintList || t == T::kFloatList || t == T::kStringList; }

Json coerce_file_value(const OptionSpec& spec, const Json& v, const std::string& where) {
  if (!is_list(spec.type)) return coerce_scalar(spec.type, v, where);
  if (!v.is_array()) bad_value(where, "expected " + type_name(spec.type));
  Json out = Json::array();
  for (const auto& e : v) out.push_back(coerce_scalar(spec.type, e, where));
  return out;
}

Json parse_text(OptionType t, const std::string& text, const std::string& where) {
  switch (t) {
    case T::kUint:
    case T::kUintList: {
      std::uint64_t u = 0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), u);
      if (ec != std::errc() || p != text.data() + text.size() || text.empty())
        bad_value(where, "'" + text + "' is not a non-negative integer");
      return u;
    }
    case T::kFloat:
    case T::kFloatList: {
      double d = 0.0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
      if (ec != std::errc() || p != text.data() + text.size() || text.empty() || !std::isfinite(d))
        bad_value(where, "'" + text + "' is not a number");
      return d;
    }
    case T::kBool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      bad_value(where, "'" + text + "' is not a boolean");
    case T::kString:
    case T::kStringList:
      return text;
  }
  return nullptr;
}

Json coerce_flag_value(const OptionSpec& spec, const Json& v, const std::string& where) {
  if (v.is_boolean() && spec.type == T::kBool) return v;
  if (!is_list(spec.type)) {
    if (!v.is_string()) return coerce_scalar(spec.type, v, where);
    return parse_text(spec.type, v.get<std::string>(), where);
  }
  Json out = Json::array();
  auto add = [&](const std::string& s) {
    // Numeric lists also accept comma-separated items.
    if (spec.type == T::kStringList) {
      out.push_back(s);
      return;
    }
    std::size_t start = 0;
    while (start <= s.size()) {
      auto end = s.find(',', start);
      if (end == std::string::npos) end = s.size();
      const std::string item = s.substr(start, end - start);
      if (!item.empty()) out.push_back(parse_text(spec.type, item, where));
      start = end + 1;
    }
  };
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_string()) bad_value(where, "list flags take strings");
      add(e.get<std::string>());
    }
  } else if (v.is_string()) {
    add(v.get<std::string>());
  } else {
    bad_value(where, "expected " + type_name(spec.type));
  }
  return out;
}

void check_sections(const Json& doc, const char* source) {
  if (doc.is_null()) return;
  if (!doc.is_object()) fail(ErrorCode::kConfig, std::string(source) + " must be an object");
  const auto sections = all_sections();
  for (const auto& [name, body] : doc.items()) {
    if (name == "seed" && !body.is_object()) continue;
    if (!body.is_object()) fail(ErrorCode::kConfig, std::string(source) + ": unknown top-level key '" + name + "'");
    if (!sections.count(name)) fail(ErrorCode::kConfig, std::string(source) + ": unknown section [" + name + "]");
    // Sections of other commands are validated against their own tables.
    std::vector<OptionSpec> table;
    if (name == "encoder") {
      table = encoder_options();
    } else {
      for (const char* c : kCommands)
        if (section_for(c) == name) table = base_options(c);
    }
    for (const auto& [key, value] : body.items())
      if (!find_spec(table, name, key))
        fail(ErrorCode::kConfig, std::string(source) + ": unknown key '" + key + "' in [" + name + "]");
  }
}

}  // namespace

std::string section_for(const std::string& command) {
  std::string s = command;
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

std::vector<OptionSpec> command_options(const std::string& command) {
  auto specs = base_options(command);
  if (uses_encoder(command)) {
    const auto enc = encoder_options();
    specs.insert(specs.end(), enc.begin(), enc.end());
  }
  return specs;
}

std::string flag_name(const OptionSpec& spec) {
  std::string key = spec.key;
  std::replace(key.begin(), key.end(), '_', '-');
  return spec.section == "encoder" ? "--encoder-" + key : "--" + key;
}

std::string fixed_parameters_text() {
  return "Fixed parameters:\n"
         "  Probe images: Gaussian noise, mean 0.45, std 0.225, clipped to [0, 1]\n"
         "  Normalization: ImageNet mean (0.485, 0.456, 0.406), std (0.229, 0.224, 0.225)\n"
         "  Effective rank: (sum s)^2 / sum s^2 over the sketch singular values\n"
         "  Local isotropy (variance): 1 - l1 / sum l of the k-NN covariance\n"
         "  kNN distance: cosine\n"
         "  Same/different: predict SAME if d < tau, tau over the 0, 5, ..., 100 percentiles\n"
         "  Canvas: 224 px, shape half-extent 37 px, background (200, 200, 200)\n";
}

Json resolve_options(const std::string& command, const Json& file, const Json& flags) {
  const auto specs = command_options(command);
  check_sections(file, "config");
  check_sections(flags, "flags");

  std::optional<std::uint64_t> env_seed;
  if (const char* env = std::getenv("SENSORANK_SEED"); env && *env) {
    env_seed = parse_text(T::kUint, env, "SENSORANK_SEED").get<std::uint64_t>();
  }
  std::optional<std::uint64_t> file_seed;
  if (file.is_object() && file.contains("seed"))
    file_seed = coerce_scalar(T::kUint, file["seed"], "config: seed").get<std::uint64_t>();

  Json out = Json::object();
  for (const auto& spec : specs) {
    Json value = spec.default_value;
    if (spec.key == "seed" && spec.section != "encoder") {
      if (env_seed) value = *env_seed;
      if (file_seed) value = *file_seed;
    }
    const std::string where = spec.section + "." + spec.key;
    if (file.is_object() && file.contains(spec.section) && file[spec.section].contains(spec.key))
      value = coerce_file_value(spec, file[spec.section][spec.key], "config: " + where);
    if (flags.is_object() && flags.contains(spec.section) && flags[spec.section].contains(spec.key))
      value = coerce_flag_value(spec, flags[spec.section][spec.key], flag_name(spec));
    out[spec.section][spec.key] = std::move(value);
  }
  return out;
}

std::string echo_config(const std::string& command, const Json& resolved) {
  std::string out = "# sensorank " SENSORANK_VERSION " resolved configuration for '" + command + "'\n";
  for (const auto& [section, body] : resolved.items()) {
    out += "\n[" + section + "]\n";
    const auto specs = command_options(command);
    for (const auto& [key, value] : body.items()) {
      const OptionSpec* spec = find_spec(specs, section, key);
      if (spec && !spec->label.empty()) {
        std::string shown = value.is_string() ? value.get<std::string>() : format_value(value);
        out += "# " + spec->label + ": " + shown + "\n";
      }
      out += key + " = " + format_value(value) + "\n";
    }
  }
  return out;
}

std::string config_hash(const std::string& echo) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : echo) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sensorank::pipeline
