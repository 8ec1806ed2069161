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

#include <Eigen/Dense>

#include "jacobian/oracle.hpp"

namespace sensorank::jacobian {

enum class NoiseMode {
  /// Plain i.i.d. Gaussian perturbations.
  kPlain,
  /// The unit-variance draws are centered and whitened so their sample
  /// covariance is exactly I. Removes sampling error from the comparison,
  /// leaving only the nonlinearity of the encoder.
  kMomentMatched,
};

struct CovarianceCheckConfig {
  double sigma = 1e-3;
  std::size_t n_samples = 100000;
  std::uint64_t seed = 42;
  NoiseMode noise = NoiseMode::kPlain;
};

struct CovarianceCheck {
  Eigen::MatrixXd empirical;  // sample covariance (divisor n-1) of f(x + delta)
  Eigen::MatrixXd predicted;  // sigma^2 J J^T from exact JVPs on the canonical basis
  double max_rel_error = 0.0; // ||empirical - predicted||_F / ||predicted||_F
};

/// Compares the augmentation covariance of the encoder output with its
/// first-order prediction J Sigma J^T for Sigma = sigma^2 I. Materializes J
/// column by column, so only meant for small toy inputs. A large
/// discrepancy is reported, not thrown.
CovarianceCheck local_feature_covariance_check(const JvpOracle& oracle, const Eigen::VectorXd& x,
                                               const CovarianceCheckConfig& config);

}  // namespace sensorank::jacobian
