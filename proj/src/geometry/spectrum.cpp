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

#include "geometry/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "common/error.hpp"

namespace sensorank::geometry {
namespace {

void require_positive_sum(const SingularSpectrum& s, double total) {
  require(!s.values.empty() && total > 0.0, ErrorCode::kAllZeroSpectrum, "spectrum has no positive values");
}

}  // namespace

SingularSpectrum SingularSpectrum::from_values(std::vector<double> values, SpectrumSource source) {
  for (double v : values)
    require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument, "spectrum values must be finite and >= 0");
  std::sort(values.begin(), values.end(), std::greater<>());
  return {std::move(values), source};
}

double SingularSpectrum::sum() const noexcept { return std::accumulate(values.begin(), values.end(), 0.0); }

double SingularSpectrum::sum_squares() const noexcept {
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return acc;
}

SingularSpectrum covariance_spectrum(const RowMatrix& rows) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  require(n >= 2 && d >= 1, ErrorCode::kInvalidArgument, "covariance needs at least 2 rows and 1 column");
  require(rows.allFinite(), ErrorCode::kInvalidArgument, "embeddings contain non-finite values");

  const Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  // Nonzero eigenvalues of X^T X and X X^T coincide; factor the smaller one.
  const Eigen::MatrixXd gram = n < d ? Eigen::MatrixXd(centered * centered.transpose())
                                     : Eigen::MatrixXd(centered.transpose() * centered);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram / static_cast<double>(n - 1),
                                                        Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorCode::kInternal, "symmetric eigensolver did not converge");

  std::vector<double> values(static_cast<std::size_t>(d), 0.0);
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  for (Eigen::Index i = 0; i < ev.size(); ++i) values[static_cast<std::size_t>(i)] = ev(ev.size() - 1 - i);

  const double top = values.front();
  require(top > 0.0, ErrorCode::kAllZeroSpectrum, "covariance is zero (all rows identical)");
  for (double& v : values)
    if (v < kEigenClampRelative * top) v = 0.0;
  return {std::move(values), SpectrumSource::kCovariance};
}

SingularSpectrum covariance_spectrum(const EmbeddingMatrix& embeddings) {
  return covariance_spectrum(embeddings.values());
}

double participation_ratio(const SingularSpectrum& s, bool normalized, std::size_t dim) {
  const double total = s.sum();
  require_positive_sum(s, total);
  const double pr = total * total / s.sum_squares();
  if (!normalized) return pr;
  require(dim >= 1, ErrorCode::kInvalidArgument, "normalized participation ratio needs dim >= 1");
  return pr / static_cast<double>(dim);
}

double isotropy_score(const SingularSpectrum& s) {
  const double total = s.sum();
  require_positive_sum(s, total);
  return 1.0 - s.values.front() / total;
}

double effective_rank_entropy(const SingularSpectrum& s) {
  const double total = s.sum();
  require_positive_sum(s, total);
  double entropy = 0.0;
  for (double v : s.values) {
    if (v <= 0.0) continue;
    const double p = v / total;
    entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

}  // namespace sensorank::geometry
