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

#include "stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "common/error.hpp"

namespace sensorank::stats {
namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) require(std::isfinite(x), ErrorCode::kInvalidArgument, std::string(what) + " has a non-finite value");
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double centered_ss(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double e : v) ss += (e - m) * (e - m);
  return ss;
}

// ref_xx/ref_yy: variance scale below which residual variance counts as zero.
CorrelationResult correlate(const std::vector<double>& x, const std::vector<double>& y, double df, double ref_xx = 0.0,
                            double ref_yy = 0.0) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  require(sxx > ref_xx * 1e-20 && sxx > 0.0, ErrorCode::kDegenerateVariance, "first variable has zero variance");
  require(syy > ref_yy * 1e-20 && syy > 0.0, ErrorCode::kDegenerateVariance, "second variable has zero variance");

  CorrelationResult out;
  out.n = x.size();
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double denom = 1.0 - out.r * out.r;
  if (denom <= 0.0) {
    out.p = 0.0;
  } else {
    out.p = t_two_sided_p(out.r * std::sqrt(df / denom), df);
  }
  return out;
}

Eigen::MatrixXd design(const std::vector<std::vector<double>>& columns, std::size_t n) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns.size() + 1));
  X.col(0).setOnes();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    require(columns[c].size() == n, ErrorCode::kDimensionMismatch, "design column length differs from y");
    check_finite(columns[c], "design column");
    for (std::size_t i = 0; i < n; ++i) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c + 1)) = columns[c][i];
  }
  return X;
}

// Returns nullopt when X is rank deficient.
std::optional<Eigen::VectorXd> least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) return std::nullopt;
  return Eigen::VectorXd(qr.solve(y));
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> residuals_on(const std::vector<double>& v, const std::vector<double>& z) {
  const Eigen::MatrixXd X = design({z}, z.size());
  const auto beta = least_squares(X, to_vec(v));
  require(beta.has_value(), ErrorCode::kDegenerateVariance, "covariate is constant");
  const Eigen::VectorXd res = to_vec(v) - X * *beta;
  return {res.data(), res.data() + res.size()};
}

template <typename T>
std::vector<T> drop(const std::vector<T>& v, std::size_t i) {
  std::vector<T> out;
  out.reserve(v.size() - 1);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != i) out.push_back(v[j]);
  return out;
}

}  // namespace

double t_two_sided_p(double t, double df) {
  require(df > 0.0, ErrorCode::kInvalidArgument, "t distribution needs df > 0");
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

double t_quantile(double prob, double df) {
  require(df > 0.0 && prob > 0.0 && prob < 1.0, ErrorCode::kInvalidArgument, "bad t quantile arguments");
  return boost::math::quantile(boost::math::students_t(df), prob);
}

CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorCode::kDimensionMismatch, "pearson inputs differ in length");
  require(x.size() >= 3, ErrorCode::kInvalidArgument, "pearson needs n >= 3");
  check_finite(x, "x");
  check_finite(y, "y");
  return correlate(x, y, static_cast<double>(x.size()) - 2.0);
}

OlsFit ols_r2(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
  const std::size_t n = y.size();
  require(!columns.empty(), ErrorCode::kInvalidArgument, "ols needs at least one predictor");
  require(n > columns.size() + 1, ErrorCode::kInvalidArgument, "ols needs n > columns + 1");
  check_finite(y, "y");
  const Eigen::MatrixXd X = design(columns, n);
  const Eigen::VectorXd yv = to_vec(y);
  const auto beta = least_squares(X, yv);
  require(beta.has_value(), ErrorCode::kSingularDesign, "design matrix is rank deficient");

  const double ss_res = (yv - X * *beta).squaredNorm();
  const double ss_tot = (yv.array() - yv.mean()).matrix().squaredNorm();
  require(ss_tot > 0.0, ErrorCode::kDegenerateVariance, "response has zero variance");
  OlsFit fit;
  fit.coefficients.assign(beta->data(), beta->data() + beta->size());
  fit.r2 = 1.0 - ss_res / ss_tot;
  return fit;
}

double loo_cv_r2(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
  const std::size_t n = y.size();
  require(!columns.empty(), ErrorCode::kInvalidArgument, "loo needs at least one predictor");
  require(n > columns.size() + 2, ErrorCode::kInvalidArgument, "loo needs n > columns + 2");
  check_finite(y, "y");
  const Eigen::MatrixXd X = design(columns, n);
  const Eigen::VectorXd yv = to_vec(y);
  const double ss_tot = (yv.array() - yv.mean()).matrix().squaredNorm();
  require(ss_tot > 0.0, ErrorCode::kDegenerateVariance, "response has zero variance");

  double press = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    Eigen::MatrixXd Xi(X.rows() - 1, X.cols());
    Eigen::VectorXd yi(X.rows() - 1);
    for (Eigen::Index r = 0, k = 0; r < X.rows(); ++r) {
      if (r == i) continue;
      Xi.row(k) = X.row(r);
      yi(k++) = yv(r);
    }
    const auto beta = least_squares(Xi, yi);
    require(beta.has_value(), ErrorCode::kSingularDesign, "design is singular in fold " + std::to_string(i));
    const double err = yv(i) - X.row(i).dot(*beta);
    press += err * err;
  }
  return 1.0 - press / ss_tot;
}

CorrelationResult partial_correlation(const std::vector<double>& x, const std::vector<double>& y,
                                      const std::vector<double>& z) {
  require(x.size() == y.size() && x.size() == z.size(), ErrorCode::kDimensionMismatch,
          "partial correlation inputs differ in length");
  require(x.size() >= 4, ErrorCode::kInvalidArgument, "partial correlation needs n >= 4");
  check_finite(x, "x");
  check_finite(y, "y");
  check_finite(z, "z");
  const double mz = mean(z);
  require(std::any_of(z.begin(), z.end(), [&](double v) { return v != mz; }), ErrorCode::kDegenerateVariance,
          "covariate is constant");
  return correlate(residuals_on(x, z), residuals_on(y, z), static_cast<double>(x.size()) - 3.0, centered_ss(x),
                   centered_ss(y));
}

JackknifeResult jackknife_significance(const std::vector<double>& x, const std::vector<double>& y, double alpha,
                                       const std::optional<std::vector<double>>& z) {
  require(x.size() == y.size(), ErrorCode::kDimensionMismatch, "jackknife inputs differ in length");
  require(x.size() >= (z ? 5u : 4u), ErrorCode::kInvalidArgument, "jackknife needs more observations");
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::kInvalidArgument, "alpha must be in (0, 1)");
  if (z) require(z->size() == x.size(), ErrorCode::kDimensionMismatch, "covariate length differs");

  JackknifeResult out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto xi = drop(x, i);
    const auto yi = drop(y, i);
    const auto fold = z ? partial_correlation(xi, yi, drop(*z, i)) : pearson(xi, yi);
    out.retained += fold.p < alpha;
    out.folds.push_back(fold);
  }
  return out;
}

SeedStability seed_stability(const std::vector<double>& values) {
  require(values.size() >= 2, ErrorCode::kInvalidArgument, "seed stability needs at least two seeds");
  check_finite(values, "seed values");
  const double n = static_cast<double>(values.size());
  SeedStability s;
  s.mean = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / (n - 1.0));
  s.cv = s.mean != 0.0 ? s.std / std::fabs(s.mean) : (s.std == 0.0 ? 0.0 : INFINITY);
  s.ci95 = t_quantile(0.975, n - 1.0) * s.std / std::sqrt(n);
  s.ci95_normal = 1.96 * s.std / std::sqrt(n);
  return s;
}

}  // namespace sensorank::stats
