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
#include <vector>

namespace sensorank::stats {

struct CorrelationResult {
  double r = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double t_two_sided_p(double t, double df);

/// Upper quantile: P(T <= q) = prob.
double t_quantile(double prob, double df);

/// Pearson r with a t(n-2) two-sided p-value. Throws DegenerateVariance.
CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y);

struct OlsFit {
  std::vector<double> coefficients;  // intercept first
  double r2 = 0.0;
};

/// Least squares with intercept. `columns` are predictors, each of length n.
OlsFit ols_r2(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

/// Leave-one-out predictive R^2 with the full-sample mean in the denominator.
double loo_cv_r2(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

/// Pearson of the residuals of x and y after regressing each on z, p with n-3 df.
CorrelationResult partial_correlation(const std::vector<double>& x, const std::vector<double>& y,
                                      const std::vector<double>& z);

struct JackknifeResult {
  std::size_t retained = 0;
  std::vector<CorrelationResult> folds;  // fold i drops observation i
};

/// Leave-one-out significance count. With `z`, each fold uses the partial
/// correlation controlling for z instead of plain Pearson.
JackknifeResult jackknife_significance(const std::vector<double>& x, const std::vector<double>& y,
                                       double alpha = 0.05,
                                       const std::optional<std::vector<double>>& z = std::nullopt);

struct SeedStability {
  double mean = 0.0;
  double std = 0.0;  // n-1 divisor
  double cv = 0.0;
  double ci95 = 0.0;         // t(n-1) half-width
  double ci95_normal = 0.0;  // 1.96 * std / sqrt(n)
};

SeedStability seed_stability(const std::vector<double>& values);

}  // namespace sensorank::stats
