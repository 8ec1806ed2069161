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

#include "common/error.hpp"

namespace sensorank {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kAllZeroSpectrum: return "AllZeroSpectrum";
    case ErrorCode::kInsufficientNeighbors: return "InsufficientNeighbors";
    case ErrorCode::kInsufficientPool: return "InsufficientPool";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kOracleNumericalFault: return "OracleNumericalFault";
    case ErrorCode::kCapabilityMissing: return "CapabilityMissing";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kAdapterProtocol: return "AdapterProtocol";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace sensorank
