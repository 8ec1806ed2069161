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

#include "jacobian/covariance_check.hpp"

#include <limits>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"

namespace sensorank::jacobian {
namespace {

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& rows) {
  const Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(rows.rows() - 1);
}

}  // namespace

CovarianceCheck local_feature_covariance_check(const JvpOracle& oracle, const Eigen::VectorXd& x,
                                               const CovarianceCheckConfig& config) {
  const auto n = static_cast<Eigen::Index>(oracle.input_shape().size());
  const auto m = static_cast<Eigen::Index>(config.n_samples);
  require(x.size() == n, ErrorCode::kDimensionMismatch, "input size does not match oracle input shape");
  require(config.sigma > 0.0, ErrorCode::kInvalidArgument, "perturbation std must be positive");
  require(m >= 2, ErrorCode::kInvalidArgument, "need at least two perturbation samples");

  Pcg32 rng = Pcg32::stream(config.seed, StreamDomain::kCovarianceNoise, 0);
  Eigen::MatrixXd noise(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) noise(i, j) = rng.normal();

  if (config.noise == NoiseMode::kMomentMatched) {
    require(m > n, ErrorCode::kInvalidArgument, "moment matching needs more samples than input dimensions");
    noise = (noise.rowwise() - noise.colwise().mean()).eval();
    const Eigen::LLT<Eigen::MatrixXd> chol(sample_covariance(noise));
    require(chol.info() == Eigen::Success, ErrorCode::kInternal, "noise covariance is not positive definite");
    // E <- E L^{-T} so that E^T E / (m-1) = I.
    noise = chol.matrixL().solve(noise.transpose()).transpose();
  }

  const auto d = static_cast<Eigen::Index>(oracle.output_dim());
  Eigen::MatrixXd outputs(m, d);
  parallel_for(static_cast<std::size_t>(m), oracle.reentrant(), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::VectorXd xp = x + config.sigma * noise.row(row).transpose();
    outputs.row(row) = oracle.embed(xp).transpose();
  });

  CovarianceCheck check;
  check.empirical = sample_covariance(outputs);
  const Eigen::MatrixXd jac = oracle.jvp_batch(x, Eigen::MatrixXd::Identity(n, n));
  check.predicted = config.sigma * config.sigma * jac * jac.transpose();

  const double denom = check.predicted.norm();
  const double diff = (check.empirical - check.predicted).norm();
  if (denom > 0.0)
    check.max_rel_error = diff / denom;
  else
    check.max_rel_error = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return check;
}

}  // namespace sensorank::jacobian
