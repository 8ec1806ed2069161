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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sensorank::jacobian {

struct InputShape {
  std::size_t channels = 3;
  std::size_t height = 224;
  std::size_t width = 224;

  std::size_t size() const noexcept { return channels * height * width; }
  friend bool operator==(const InputShape&, const InputShape&) = default;
};

/// Capability contract for anything that can embed an input and push a
/// tangent through itself: built-in toy encoders and external adapters.
///
/// Inputs are flattened CHW vectors of length input_shape().size(). `jvp`
/// must be linear in `direction`. Tap indices refer to positions in
/// `taps()`; the truncated map at tap t is x -> block_t(...block_1(x)).
class JvpOracle {
 public:
  virtual ~JvpOracle() = default;

  virtual InputShape input_shape() const = 0;
  virtual std::size_t output_dim() const = 0;

  /// True when embed/jvp may be called concurrently.
  virtual bool reentrant() const { return true; }

  virtual std::vector<std::string> taps() const { return {}; }

  virtual Eigen::VectorXd embed(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd jvp(const Eigen::VectorXd& x, const Eigen::VectorXd& direction) const = 0;

  /// JVP of the truncated map at `tap`. Default: CapabilityMissing.
  virtual Eigen::VectorXd jvp_at_tap(std::size_t tap, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& direction) const;

  /// Columns are J(x) d_j for each column d_j of `directions`, at the
  /// output or at `tap`. Default loops over jvp / jvp_at_tap.
  virtual Eigen::MatrixXd jvp_batch(const Eigen::VectorXd& x, const Eigen::MatrixXd& directions,
                                    std::optional<std::size_t> tap = std::nullopt) const;
};

}  // namespace sensorank::jacobian
