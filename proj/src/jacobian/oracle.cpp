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

#include "jacobian/oracle.hpp"

#include "common/error.hpp"

namespace sensorank::jacobian {

Eigen::VectorXd JvpOracle::jvp_at_tap(std::size_t, const Eigen::VectorXd&, const Eigen::VectorXd&) const {
  fail(ErrorCode::kCapabilityMissing, "oracle does not expose per-block taps");
}

Eigen::MatrixXd JvpOracle::jvp_batch(const Eigen::VectorXd& x, const Eigen::MatrixXd& directions,
                                     std::optional<std::size_t> tap) const {
  Eigen::MatrixXd out;
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    const Eigen::VectorXd d = directions.col(j);
    Eigen::VectorXd y = tap ? jvp_at_tap(*tap, x, d) : jvp(x, d);
    if (j == 0) out.resize(y.size(), directions.cols());
    out.col(j) = y;
  }
  return out;
}

}  // namespace sensorank::jacobian
