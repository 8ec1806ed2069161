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

#include <stdexcept>
#include <string>
#include <string_view>

namespace sensorank {

// Numeric values are mirrored by sr_status in the C header; keep in sync.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kAllZeroSpectrum = 3,
  kInsufficientNeighbors = 4,
  kInsufficientPool = 5,
  kZeroVector = 6,
  kDegenerateLabels = 7,
  kDegenerateVariance = 8,
  kSingularDesign = 9,
  kOracleNumericalFault = 10,
  kCapabilityMissing = 11,
  kManifestMismatch = 12,
  kIo = 13,
  kFormat = 14,
  kAdapterProtocol = 15,
  kVersionMismatch = 16,
  kConfig = 17,
  kInternal = 99,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace sensorank
