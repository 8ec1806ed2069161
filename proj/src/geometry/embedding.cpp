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

#include "geometry/embedding.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common/error.hpp"

namespace sensorank::geometry {
namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint32_t get_u32(const std::string& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  return v;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return ids;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(RowMatrix values, std::vector<std::string> ids)
    : values_(std::move(values)), ids_(std::move(ids)) {
  require(ids_.size() == rows(), ErrorCode::kDimensionMismatch,
          "embedding id count (" + std::to_string(ids_.size()) + ") does not match rows (" +
              std::to_string(rows()) + ")");
  build_index();
}

EmbeddingMatrix::EmbeddingMatrix(RowMatrix values) : values_(std::move(values)) {
  ids_ = default_ids(rows());
  build_index();
}

void EmbeddingMatrix::build_index() {
  index_.clear();
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const bool inserted = index_.emplace(ids_[i], static_cast<std::ptrdiff_t>(i)).second;
    require(inserted, ErrorCode::kFormat, "duplicate embedding id '" + ids_[i] + "'");
  }
}

std::ptrdiff_t EmbeddingMatrix::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

void EmbeddingMatrix::validate(std::size_t min_rows) const {
  require(rows() >= min_rows, ErrorCode::kInvalidArgument,
          "embedding matrix needs at least " + std::to_string(min_rows) + " rows, got " + std::to_string(rows()));
  require(dim() >= 1, ErrorCode::kInvalidArgument, "embedding dimension must be at least 1");
  require(values_.allFinite(), ErrorCode::kInvalidArgument, "embedding matrix contains non-finite values");
}

void write_emb1(const std::filesystem::path& path, const EmbeddingMatrix& e) {
  std::string out(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(e.rows()));
  put_u32(out, static_cast<std::uint32_t>(e.dim()));
  out.reserve(out.size() + e.rows() * e.dim() * 4);
  for (std::size_t i = 0; i < e.rows(); ++i)
    for (std::size_t j = 0; j < e.dim(); ++j)
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(e.values()(i, j))));
  out += nlohmann::json{{"ids", e.ids()}}.dump();

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  require(static_cast<bool>(f.flush()), ErrorCode::kIo, "cannot write '" + path.string() + "'");
}

EmbeddingMatrix read_emb1(const std::filesystem::path& path) {
  const std::string data = read_all(path);
  require(data.size() >= 12 && data.compare(0, 4, kMagic, 4) == 0, ErrorCode::kFormat,
          "'" + path.string() + "' is not an EMB1 file");
  const std::size_t n = get_u32(data, 4);
  const std::size_t d = get_u32(data, 8);
  const std::size_t payload = n * d * 4;
  require(data.size() >= 12 + payload, ErrorCode::kFormat, "EMB1 payload truncated in '" + path.string() + "'");

  RowMatrix values(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      values(i, j) = std::bit_cast<float>(get_u32(data, 12 + (i * d + j) * 4));

  std::vector<std::string> ids;
  const std::string_view trailer(data.data() + 12 + payload, data.size() - 12 - payload);
  if (trailer.empty()) {
    ids = default_ids(n);
  } else {
    try {
      const auto j = nlohmann::json::parse(trailer);
      ids = (j.is_array() ? j : j.at("ids")).get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kFormat, "EMB1 id trailer in '" + path.string() + "' is invalid: " + e.what());
    }
  }
  require(ids.size() == n, ErrorCode::kFormat, "EMB1 id trailer length does not match N in '" + path.string() + "'");
  return EmbeddingMatrix(std::move(values), std::move(ids));
}

EmbeddingMatrix read_embeddings_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kFormat, "empty CSV '" + path.string() + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  require(header.size() >= 2 && header[0] == "id", ErrorCode::kFormat,
          "CSV header must be id,dim0,...: '" + path.string() + "'");
  for (std::size_t j = 1; j < header.size(); ++j)
    require(header[j] == "dim" + std::to_string(j - 1), ErrorCode::kFormat,
            "CSV header column " + std::to_string(j) + " must be dim" + std::to_string(j - 1));
  const std::size_t d = header.size() - 1;

  std::vector<std::string> ids;
  std::vector<double> flat;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    ids.push_back(cell);
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        flat.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorCode::kFormat, "bad number '" + cell + "' on line " + std::to_string(line_no));
      }
      ++count;
    }
    require(count == d, ErrorCode::kFormat, "line " + std::to_string(line_no) + " has " + std::to_string(count) +
                                                " values, expected " + std::to_string(d));
  }
  RowMatrix values = Eigen::Map<RowMatrix>(flat.data(), static_cast<Eigen::Index>(ids.size()),
                                           static_cast<Eigen::Index>(d));
  return EmbeddingMatrix(std::move(values), std::move(ids));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path.string() + "'");
  char head[4] = {};
  in.read(head, 4);
  if (in.gcount() == 4 && std::equal(head, head + 4, kMagic)) return read_emb1(path);
  return read_embeddings_csv(path);
}

}  // namespace sensorank::geometry
