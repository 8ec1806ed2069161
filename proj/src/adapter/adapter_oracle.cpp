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

#include "adapter/adapter_oracle.hpp"

#include <csignal>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "common/base64.hpp"
#include "common/error.hpp"

namespace sensorank::adapter {
namespace {

using json = nlohmann::json;

std::vector<float> to_f32(const Eigen::VectorXd& v) {
  std::vector<float> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<float>(v(i));
  return out;
}

[[noreturn]] void protocol_error(const std::string& msg) { fail(ErrorCode::kAdapterProtocol, "adapter: " + msg); }

}  // namespace

Handshake parse_handshake(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    protocol_error("handshake is not valid JSON: '" + line.substr(0, 200) + "'");
  }
  if (j.contains("error")) protocol_error("handshake reported error: " + j["error"].dump());

  Handshake h;
  try {
    h.protocol_version = j.at("protocol_version").get<std::string>();
    if (h.protocol_version != kProtocolVersion)
      protocol_error("unsupported protocol version '" + h.protocol_version + "'");
    h.model = j.value("model", "");
    h.checkpoint = j.value("checkpoint", "");
    h.output_dim = j.at("output_dim").get<std::size_t>();
    const auto shape = j.at("input_shape").get<std::vector<std::size_t>>();
    if (shape.size() != 3) protocol_error("input_shape must have three entries (C, H, W)");
    h.input_shape = {shape[0], shape[1], shape[2]};
    const auto& caps = j.at("capabilities");
    h.can_embed = caps.value("embed", false);
    h.can_jvp = caps.value("jvp", false);
    if (caps.contains("taps")) h.taps = caps.at("taps").get<std::vector<std::string>>();
    h.reentrant = j.value("reentrant", false);
  } catch (const json::exception& e) {
    protocol_error(std::string("malformed handshake: ") + e.what());
  }
  if (h.output_dim == 0 || h.input_shape.size() == 0) protocol_error("handshake declares empty dimensions");
  return h;
}

AdapterOracle::AdapterOracle(const std::string& command) : command_(command) {
  // A dead child must surface as an I/O error, not terminate the host.
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) fail(ErrorCode::kIo, "adapter: pipe() failed");
  if (pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    fail(ErrorCode::kIo, "adapter: pipe() failed");
  }

  child_ = fork();
  if (child_ < 0) fail(ErrorCode::kIo, "adapter: fork() failed");
  if (child_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);

  try {
    handshake_ = parse_handshake(read_line());
  } catch (...) {
    close();
    throw;
  }
}

AdapterOracle::~AdapterOracle() { close(); }

void AdapterOracle::close() {
  std::lock_guard lock(mutex_);
  if (to_child_ >= 0) {
    const std::string bye = json{{"op", "shutdown"}, {"id", next_id_++}}.dump() + "\n";
    [[maybe_unused]] auto ignored = ::write(to_child_, bye.data(), bye.size());
    ::close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    ::close(from_child_);
    from_child_ = -1;
  }
  if (child_ > 0) {
    int status = 0;
    waitpid(child_, &status, 0);
    child_ = -1;
  }
}

void AdapterOracle::write_line(const std::string& line) const {
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(to_child_, line.data() + done, line.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) fail(ErrorCode::kIo, "adapter: write to '" + command_ + "' failed: " + std::strerror(errno));
    done += static_cast<std::size_t>(n);
  }
}

std::string AdapterOracle::read_line() const {
  for (;;) {
    const auto nl = read_buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = read_buffer_.substr(0, nl);
      read_buffer_.erase(0, nl + 1);
      return line;
    }
    char buf[65536];
    const ssize_t n = ::read(from_child_, buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) protocol_error("'" + command_ + "' closed its output before replying");
    read_buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

Eigen::VectorXd AdapterOracle::request(const std::string& op, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd* direction, const std::string* tap) const {
  require(static_cast<std::size_t>(x.size()) == handshake_.input_shape.size(), ErrorCode::kDimensionMismatch,
          "adapter: input length does not match the declared input shape");
  std::lock_guard lock(mutex_);
  require(to_child_ >= 0, ErrorCode::kAdapterProtocol, "adapter: connection already closed");

  const std::uint64_t id = next_id_++;
  json req{{"op", op}, {"id", id}, {"input", base64::encode_f32(to_f32(x))}};
  if (direction) req["direction"] = base64::encode_f32(to_f32(*direction));
  if (tap) req["tap"] = *tap;
  write_line(req.dump() + "\n");

  json reply;
  const std::string line = read_line();
  try {
    reply = json::parse(line);
  } catch (const json::parse_error&) {
    protocol_error("reply is not valid JSON");
  }
  if (!reply.contains("id") || reply["id"] != id) protocol_error("reply id does not match request " + std::to_string(id));
  if (reply.contains("error")) protocol_error("request " + std::to_string(id) + " failed: " + reply["error"].dump());
  if (!reply.contains("output") || !reply["output"].is_string()) protocol_error("reply has no output payload");

  const auto values = base64::decode_f32(reply["output"].get<std::string>());
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<Eigen::Index>(i)) = values[i];
  return out;
}

Eigen::VectorXd AdapterOracle::embed(const Eigen::VectorXd& x) const {
  require(handshake_.can_embed, ErrorCode::kCapabilityMissing, "adapter does not support embed");
  Eigen::VectorXd out = request("embed", x, nullptr, nullptr);
  if (static_cast<std::size_t>(out.size()) != handshake_.output_dim)
    protocol_error("embed reply has " + std::to_string(out.size()) + " values, handshake declared " +
                   std::to_string(handshake_.output_dim));
  return out;
}

Eigen::VectorXd AdapterOracle::jvp(const Eigen::VectorXd& x, const Eigen::VectorXd& direction) const {
  require(handshake_.can_jvp, ErrorCode::kCapabilityMissing, "adapter does not support jvp");
  require(direction.size() == x.size(), ErrorCode::kDimensionMismatch, "adapter: direction length mismatch");
  Eigen::VectorXd out = request("jvp", x, &direction, nullptr);
  if (static_cast<std::size_t>(out.size()) != handshake_.output_dim)
    protocol_error("jvp reply has " + std::to_string(out.size()) + " values, handshake declared " +
                   std::to_string(handshake_.output_dim));
  return out;
}

Eigen::VectorXd AdapterOracle::jvp_at_tap(std::size_t tap, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& direction) const {
  require(handshake_.can_jvp, ErrorCode::kCapabilityMissing, "adapter does not support jvp");
  require(tap < handshake_.taps.size(), ErrorCode::kCapabilityMissing, "adapter does not declare tap " + std::to_string(tap));
  return request("jvp", x, &direction, &handshake_.taps[tap]);
}

}  // namespace sensorank::adapter
