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

#include <vector>

#include "geometry/embedding.hpp"

namespace sensorank::geometry {

enum class SpectrumSource { kCovariance, kJacobian };

/// Nonincreasing, nonnegative eigen- or singular values.
struct SingularSpectrum {
  std::vector<double> values;
  SpectrumSource source = SpectrumSource::kCovariance;

  /// Sorts descending and checks nonnegativity/finiteness.
  static SingularSpectrum from_values(std::vector<double> values, SpectrumSource source);

  double sum() const noexcept;
  double sum_squares() const noexcept;
};

/// Relative clamp: eigenvalues below this fraction of the largest are zeroed.
inline constexpr double kEigenClampRelative = 1e-12;

/// Eigenvalues of the mean-centered sample covariance (divisor N-1), clamped
/// and sorted. Returns D values. Uses the N x N Gram matrix when N < D.
/// Throws AllZeroSpectrum when every row is identical.
SingularSpectrum covariance_spectrum(const EmbeddingMatrix& embeddings);
SingularSpectrum covariance_spectrum(const RowMatrix& rows);

/// (sum l)^2 / sum l^2, divided by `dim` when `normalized`.
double participation_ratio(const SingularSpectrum& s, bool normalized, std::size_t dim);

/// 1 - l1 / sum l.
double isotropy_score(const SingularSpectrum& s);

/// exp(-sum p ln p), p = l / sum l, with 0 ln 0 = 0.
double effective_rank_entropy(const SingularSpectrum& s);

}  // namespace sensorank::geometry
