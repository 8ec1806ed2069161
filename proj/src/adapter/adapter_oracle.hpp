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

#include <cstdint>
#include <mutex>
#include <string>
#include <sys/types.h>
#include <vector>

#include "jacobian/oracle.hpp"

namespace sensorank::adapter {

inline constexpr std::string_view kProtocolVersion = "SRA/1";

struct Handshake {
  std::string protocol_version;
  std::string model;
  std::string checkpoint;
  std::size_t output_dim = 0;
  jacobian::InputShape input_shape;
  bool can_embed = false;
  bool can_jvp = false;
  std::vector<std::string> taps;
  bool reentrant = false;
};

/// Client side of the adapter wire protocol. Spawns `command` through
/// /bin/sh, reads the handshake line, then exchanges one JSON object per
/// line: {op, id, input, direction?, tap?} -> {id, output} | {id, error}.
/// Float payloads are base64 little-endian f32.
///
/// Requests are serialized through one pipe; reentrant() reports the
/// handshake flag but calls never overlap on the wire.
class AdapterOracle final : public jacobian::JvpOracle {
 public:
  explicit AdapterOracle(const std::string& command);
  ~AdapterOracle() override;

  AdapterOracle(const AdapterOracle&) = delete;
  AdapterOracle& operator=(const AdapterOracle&) = delete;

  const Handshake& handshake() const noexcept { return handshake_; }

  jacobian::InputShape input_shape() const override { return handshake_.input_shape; }
  std::size_t output_dim() const override { return handshake_.output_dim; }
  bool reentrant() const override { return handshake_.reentrant; }
  std::vector<std::string> taps() const override { return handshake_.taps; }

  Eigen::VectorXd embed(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd jvp(const Eigen::VectorXd& x, const Eigen::VectorXd& direction) const override;
  Eigen::VectorXd jvp_at_tap(std::size_t tap, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& direction) const override;

  /// Sends shutdown and reaps the child. Idempotent; also run by the destructor.
  void close();

 private:
  Eigen::VectorXd request(const std::string& op, const Eigen::VectorXd& x, const Eigen::VectorXd* direction,
                          const std::string* tap) const;
  void write_line(const std::string& line) const;
  std::string read_line() const;

  std::string command_;
  Handshake handshake_;
  pid_t child_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  mutable std::mutex mutex_;
  mutable std::string read_buffer_;
  mutable std::uint64_t next_id_ = 1;
};

/// Parses and validates a handshake line (exposed for tests).
Handshake parse_handshake(const std::string& line);

}  // namespace sensorank::adapter
