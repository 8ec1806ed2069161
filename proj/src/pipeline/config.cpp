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

#include "pipeline/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace sensorank::pipeline {
namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::string where) : s_(line), where_(std::move(where)) {}

  [[noreturn]] void error(const std::string& msg) const { fail(ErrorCode::kConfig, where_ + ": " + msg); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string key() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) error("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  Json value() {
    skip_ws();
    if (pos_ >= s_.size()) error("missing value");
    const char c = s_[pos_];
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    return scalar();
  }

 private:
  Json basic_string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) error("unterminated escape");
        switch (s_[pos_++]) {
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          default: error("unsupported escape sequence");
        }
      }
      out += c;
    }
    if (pos_ >= s_.size()) error("unterminated string");
    ++pos_;
    return out;
  }

  Json literal_string() {
    const auto end = s_.find('\'', pos_ + 1);
    if (end == std::string_view::npos) error("unterminated string");
    Json out = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
    pos_ = end + 1;
    return out;
  }

  Json array() {
    ++pos_;
    Json out = Json::array();
    for (;;) {
      if (consume(']')) return out;
      if (pos_ >= s_.size()) error("unterminated array");
      if (s_[pos_] == '[') error("nested arrays are not supported");
      out.push_back(value());
      if (consume(',')) continue;
      if (consume(']')) return out;
      error("expected ',' or ']' in array");
    }
  }

  Json scalar() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' && s_[pos_] != ' ' &&
           s_[pos_] != '\t' && s_[pos_] != '\r')
      ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::erase(tok, '_');
    if (tok.empty()) error("missing value");
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (*b == '+') ++b;
    if (tok.find_first_of(".eE") == std::string::npos || tok == "inf" || tok == "nan") {
      std::int64_t i = 0;
      const auto [p, ec] = std::from_chars(b, e, i);
      if (ec == std::errc() && p == e) return i;
    } else {
      double d = 0.0;
      const auto [p, ec] = std::from_chars(b, e, d);
      if (ec == std::errc() && p == e && std::isfinite(d)) return d;
    }
    error("cannot parse value '" + std::string(s_.substr(start, pos_ - start)) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::string where_;
};

}  // namespace

Json parse_config(std::string_view text, const std::string& source) {
  Json doc = Json::object();
  Json* section = &doc;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    LineParser p(line, source + ":" + std::to_string(line_no));
    if (p.at_end_or_comment()) continue;
    if (p.consume('[')) {
      const std::string name = p.key();
      if (!p.consume(']')) p.error("expected ']' after section name");
      if (!p.at_end_or_comment()) p.error("trailing characters after section header");
      if (doc.contains(name)) p.error("duplicate section [" + name + "]");
      doc[name] = Json::object();
      section = &doc[name];
      continue;
    }
    const std::string key = p.key();
    if (!p.consume('=')) p.error("expected '=' after key '" + key + "'");
    Json value = p.value();
    if (!p.at_end_or_comment()) p.error("trailing characters after value");
    if (section->contains(key)) p.error("duplicate key '" + key + "'");
    (*section)[key] = std::move(value);
  }
  return doc;
}

Json load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kConfig, "cannot open config file " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str(), path.string());
}

std::string format_value(const Json& v) {
  if (v.is_string()) {
    std::string out = "\"";
    for (char c : v.get<std::string>()) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out + "\"";
  }
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_value(v[i]);
    return out + "]";
  }
  if (v.is_number_float()) {
    std::string s = v.dump();
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
  }
  return v.dump();
}

}  // namespace sensorank::pipeline
