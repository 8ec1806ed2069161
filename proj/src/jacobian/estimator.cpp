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

#include "jacobian/estimator.hpp"

#include <numeric>

#include <Eigen/SVD>

#include "common/error.hpp"
#include "common/parallel.hpp"

namespace sensorank::jacobian {

SingularSpectrum estimate_singular_values(const JvpOracle& oracle, const Eigen::VectorXd& x,
                                          const DirectionSet& directions, std::optional<std::size_t> tap) {
  const std::size_t n = oracle.input_shape().size();
  require(static_cast<std::size_t>(directions.matrix.rows()) == n, ErrorCode::kDimensionMismatch,
          "direction dimension " + std::to_string(directions.matrix.rows()) + " does not match oracle input size " +
              std::to_string(n));
  require(static_cast<std::size_t>(x.size()) == n, ErrorCode::kDimensionMismatch,
          "input size does not match oracle input shape");

  const Eigen::MatrixXd sketch = oracle.jvp_batch(x, directions.matrix, tap);
  require(sketch.cols() == directions.matrix.cols(), ErrorCode::kDimensionMismatch,
          "oracle returned the wrong number of JVP columns");
  for (Eigen::Index j = 0; j < sketch.cols(); ++j)
    require(sketch.col(j).allFinite(), ErrorCode::kOracleNumericalFault,
            "non-finite JVP output for direction " + std::to_string(j));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sketch);
  const Eigen::VectorXd& sv = svd.singularValues();
  return SingularSpectrum::from_values(std::vector<double>(sv.data(), sv.data() + sv.size()),
                                       geometry::SpectrumSource::kJacobian);
}

double jer(const SingularSpectrum& spectrum) {
  return geometry::participation_ratio(spectrum, /*normalized=*/false, spectrum.values.size());
}

std::vector<double> normalized_spectrum(const SingularSpectrum& spectrum) {
  require(!spectrum.values.empty() && spectrum.values.front() > 0.0, ErrorCode::kAllZeroSpectrum,
          "cannot normalize a zero spectrum");
  std::vector<double> out(spectrum.values.size());
  const double top = spectrum.values.front();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum.values[i] / top;
  out.front() = 1.0;
  return out;
}

namespace {

JerRun run_jer(const JvpOracle& oracle, std::optional<std::size_t> tap, const JerConfig& config) {
  require(config.n_images >= 1, ErrorCode::kInvalidArgument, "need at least one probe image");
  const InputShape shape = oracle.input_shape();

  JerRun run;
  run.per_image.assign(config.n_images, 0.0);
  run.spectra.resize(config.keep_spectra ? config.n_images : 0);

  std::optional<DirectionSet> shared;
  if (config.shared_directions) shared = orthonormal_directions(shape.size(), config.k, config.seed, 0);

  parallel_for(config.n_images, oracle.reentrant(), [&](std::size_t i) {
    const Eigen::VectorXd x = imagenet_normalize(raw_probe_image(config.seed, i, shape), shape);
    const DirectionSet dirs = shared ? *shared : orthonormal_directions(shape.size(), config.k, config.seed, i);
    try {
      SingularSpectrum s = estimate_singular_values(oracle, x, dirs, tap);
      run.per_image[i] = jer(s);
      if (config.keep_spectra) run.spectra[i] = std::move(s);
    } catch (const Error& e) {
      fail(e.code(), "probe image " + std::to_string(i) + ": " + e.what());
    }
  });

  run.mean = std::accumulate(run.per_image.begin(), run.per_image.end(), 0.0) /
             static_cast<double>(run.per_image.size());
  return run;
}

}  // namespace

JerRun jer_mean(const JvpOracle& oracle, const JerConfig& config) { return run_jer(oracle, std::nullopt, config); }

JerRun jer_mean_at_tap(const JvpOracle& oracle, std::size_t tap, const JerConfig& config) {
  require(tap < oracle.taps().size(), ErrorCode::kCapabilityMissing, "tap index out of range");
  return run_jer(oracle, tap, config);
}

std::vector<std::pair<std::string, double>> jer_depth_profile(const JvpOracle& oracle, const JerConfig& config) {
  const auto taps = oracle.taps();
  require(!taps.empty(), ErrorCode::kCapabilityMissing, "oracle declares no taps; depth profile unavailable");
  std::vector<std::pair<std::string, double>> profile;
  for (std::size_t t = 0; t < taps.size(); ++t) profile.emplace_back(taps[t], run_jer(oracle, t, config).mean);
  return profile;
}

}  // namespace sensorank::jacobian
