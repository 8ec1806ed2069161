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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geometry/spectrum.hpp"
#include "jacobian/oracle.hpp"
#include "jacobian/probes.hpp"

namespace sensorank::jacobian {

using geometry::SingularSpectrum;

/// Singular values of the sketch Y = J(x) * Omega, one JVP per column of
/// `directions`. Throws OracleNumericalFault naming the first direction
/// whose JVP is not finite.
SingularSpectrum estimate_singular_values(const JvpOracle& oracle, const Eigen::VectorXd& x,
                                          const DirectionSet& directions,
                                          std::optional<std::size_t> tap = std::nullopt);

/// Jacobian effective rank: (sum s)^2 / sum s^2, in [1, k].
double jer(const SingularSpectrum& spectrum);

/// s_i / s_1.
std::vector<double> normalized_spectrum(const SingularSpectrum& spectrum);

struct JerConfig {
  std::size_t n_images = 100;
  std::size_t k = 32;
  std::uint64_t seed = 42;
  /// Reuse one Omega for every image instead of drawing a fresh one per image.
  bool shared_directions = false;
  bool keep_spectra = false;
};

struct JerRun {
  double mean = 0.0;
  std::vector<double> per_image;
  std::vector<SingularSpectrum> spectra;  // filled when keep_spectra
};

/// Mean JER over seeded probe images. Images run in parallel when the
/// oracle is reentrant. Faults are rethrown with the image index attached.
JerRun jer_mean(const JvpOracle& oracle, const JerConfig& config = {});

/// Same pipeline against the truncated map at one tap.
JerRun jer_mean_at_tap(const JvpOracle& oracle, std::size_t tap, const JerConfig& config = {});

/// One (tap name, mean JER) pair per declared tap, in depth order. Throws
/// CapabilityMissing when the oracle declares no taps.
std::vector<std::pair<std::string, double>> jer_depth_profile(const JvpOracle& oracle, const JerConfig& config = {});

}  // namespace sensorank::jacobian
