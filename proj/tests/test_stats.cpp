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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "stats/correlation.hpp"
#include "stats/records.hpp"
#include "support/test_util.hpp"

namespace sensorank::stats {
namespace {

using sensorank::testing::fixture;

std::vector<double> noise(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (double& x : v) x = nd(gen);
  return v;
}

// two-pass textbook Pearson, independent of the library's implementation
double naive_r(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

struct Fixture {
  std::vector<ModelRecord> records;
  Fixture() {
    records = load_records(fixture("table2.csv"));
    join_covariates(records, load_records(fixture("dims.csv")));
  }
  std::vector<double> col(const std::string& k) const { return column(records, k); }
};

TEST(TDistribution, CauchyClosedForm) {
  for (double t : {0.1, 0.5, 1.0, 3.0, 12.706, 100.0})
    EXPECT_NEAR(t_two_sided_p(t, 1), 1.0 - 2.0 / M_PI * std::atan(t), 1e-12) << t;
}

TEST(TDistribution, TwoDegreesClosedForm) {
  for (double t : {0.2, 1.0, 2.5, 4.303, 30.0})
    EXPECT_NEAR(t_two_sided_p(t, 2), 1.0 - t / std::sqrt(2.0 + t * t), 1e-12) << t;
}

TEST(TDistribution, PublishedTableValues) {
  // two-sided critical values from standard t tables (three decimals)
  EXPECT_NEAR(t_two_sided_p(12.706, 1), 0.05, 1e-4);
  EXPECT_NEAR(t_two_sided_p(2.228, 10), 0.05, 1e-4);
  EXPECT_NEAR(t_two_sided_p(2.086, 19), 0.05, 1e-3);
  EXPECT_NEAR(t_two_sided_p(2.093, 19), 0.05, 1e-4);
  EXPECT_NEAR(t_two_sided_p(2.861, 19), 0.01, 1e-4);
  EXPECT_NEAR(t_two_sided_p(3.883, 19), 0.001, 1e-5);
  EXPECT_NEAR(t_two_sided_p(2.845, 20), 0.01, 1e-4);
  EXPECT_NEAR(t_two_sided_p(1.960, 1e7), 0.05, 1e-4);
  EXPECT_NEAR(t_quantile(0.975, 20), 2.086, 5e-4);
  EXPECT_NEAR(t_quantile(0.975, 4), 2.776, 5e-4);
  EXPECT_NEAR(t_quantile(0.995, 9), 3.250, 5e-4);
  EXPECT_EQ(t_two_sided_p(0.0, 5), 1.0);
}

TEST(TDistribution, MonotoneInT) {
  for (double df : {1.0, 5.0, 19.0}) {
    double prev = 1.0 + 1e-12;
    for (double t = 0.0; t < 10.0; t += 0.25) {
      const double p = t_two_sided_p(t, df);
      EXPECT_LT(p, prev);
      prev = p;
    }
  }
}

TEST(Pearson, PerfectLine) {
  std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  const auto r = pearson(x, y);
  EXPECT_NEAR(r.r, 1.0, 1e-15);
  EXPECT_LT(r.p, 1e-12);
  EXPECT_EQ(r.n, 6u);
}

TEST(Pearson, SymmetricAndAffineInvariant) {
  std::mt19937_64 gen(1);
  const auto x = noise(30, gen);
  const auto y = noise(30, gen);
  const auto base = pearson(x, y);
  EXPECT_NEAR(base.r, naive_r(x, y), 1e-12);
  EXPECT_NEAR(pearson(y, x).r, base.r, 1e-12);
  std::vector<double> xa, ya;
  for (double v : x) xa.push_back(3.5 * v - 8);
  for (double v : y) ya.push_back(0.01 * v + 100);
  EXPECT_NEAR(pearson(xa, ya).r, base.r, 1e-12);
}

TEST(Pearson, PValueMatchesTStatistic) {
  std::mt19937_64 gen(2);
  const auto x = noise(21, gen);
  const auto y = noise(21, gen);
  const auto r = pearson(x, y);
  const double t = r.r * std::sqrt(19.0 / (1 - r.r * r.r));
  EXPECT_NEAR(r.p, t_two_sided_p(std::abs(t), 19), 1e-14);
}

TEST(Pearson, PValueMonotoneInAbsR) {
  // y = x + c * e with decreasing c traces increasing |r| at fixed n
  std::mt19937_64 gen(3);
  const auto x = noise(21, gen);
  const auto e = noise(21, gen);
  double prev_r = -1, prev_p = 2;
  for (double c : {10.0, 3.0, 1.0, 0.5, 0.1}) {
    std::vector<double> y(21);
    for (int i = 0; i < 21; ++i) y[i] = x[i] + c * e[i];
    const auto r = pearson(x, y);
    ASSERT_GT(std::abs(r.r), prev_r);
    EXPECT_LT(r.p, prev_p);
    prev_r = std::abs(r.r);
    prev_p = r.p;
  }
}

TEST(Pearson, DegenerateInputs) {
  EXPECT_SR_ERROR(pearson({1, 1, 1, 1}, {1, 2, 3, 4}), ErrorCode::kDegenerateVariance);
  EXPECT_SR_ERROR(pearson({1, 2, 3}, {1, 2}), ErrorCode::kDimensionMismatch);
  EXPECT_SR_ERROR(pearson({1, 2}, {1, 2}), ErrorCode::kInvalidArgument);
}

TEST(Ols, AffineDataIsPerfectFit) {
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> b{0, 1, 0, 1, 1, 0, 2};
  std::vector<double> y;
  for (int i = 0; i < 7; ++i) y.push_back(3 + 2 * a[i] - b[i]);
  const auto fit = ols_r2({a, b}, y);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
  ASSERT_EQ(fit.coefficients.size(), 3u);
  EXPECT_NEAR(fit.coefficients[0], 3, 1e-10);
  EXPECT_NEAR(fit.coefficients[1], 2, 1e-10);
  EXPECT_NEAR(fit.coefficients[2], -1, 1e-10);
  EXPECT_NEAR(loo_cv_r2({a, b}, y), 1.0, 1e-10);
}

TEST(Ols, NoiseColumnExplainsLittle) {
  std::mt19937_64 gen(5);
  double r2_sum = 0.0, loo_sum = 0.0;
  int loo_high = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto x = noise(21, gen);
    const auto y = noise(21, gen);
    r2_sum += ols_r2({x}, y).r2;
    const double loo = loo_cv_r2({x}, y);
    loo_sum += loo;
    loo_high += loo >= 0.2;
  }
  EXPECT_LE(r2_sum / 100, 0.15);
  EXPECT_LT(loo_sum / 100, 0.0);
  // P(loo >= 0.2) is about 0.5% per draw at n=21, so a per-seed max is not a stable bound
  EXPECT_LE(loo_high, 5);
}

TEST(Ols, SingleColumnR2IsSquaredPearson) {
  std::mt19937_64 gen(6);
  const auto x = noise(15, gen);
  const auto y = noise(15, gen);
  EXPECT_NEAR(ols_r2({x}, y).r2, std::pow(naive_r(x, y), 2), 1e-12);
}

TEST(Ols, CollinearDesignIsSingular) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  std::vector<double> b;
  for (double v : a) b.push_back(2 * v);
  EXPECT_SR_ERROR(ols_r2({a, b}, {1, 0, 2, 1, 3}), ErrorCode::kSingularDesign);
}

TEST(Loo, MatchesExplicitRefits) {
  std::mt19937_64 gen(8);
  const auto x = noise(12, gen);
  const auto y = noise(12, gen);
  // closed-form simple regression per fold
  double press = 0.0;
  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / 12;
  double sst = 0.0;
  for (int i = 0; i < 12; ++i) {
    double mx = 0, my = 0;
    for (int j = 0; j < 12; ++j)
      if (j != i) {
        mx += x[j];
        my += y[j];
      }
    mx /= 11;
    my /= 11;
    double sxy = 0, sxx = 0;
    for (int j = 0; j < 12; ++j)
      if (j != i) {
        sxy += (x[j] - mx) * (y[j] - my);
        sxx += (x[j] - mx) * (x[j] - mx);
      }
    const double pred = my + sxy / sxx * (x[i] - mx);
    press += (y[i] - pred) * (y[i] - pred);
    sst += (y[i] - ybar) * (y[i] - ybar);
  }
  EXPECT_NEAR(loo_cv_r2({x}, y), 1.0 - press / sst, 1e-12);
}

TEST(Partial, OrthogonalCovariateChangesNothing) {
  std::mt19937_64 gen(9);
  const auto x = noise(20, gen);
  const auto y = noise(20, gen);
  auto z = noise(20, gen);
  // center z, then remove its components along centered x and centered y
  const auto center = [](std::vector<double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    for (double& e : v) e -= m;
    return v;
  };
  const auto xc = center(x);
  const auto yc = center(y);
  z = center(z);
  const auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };
  // Gram-Schmidt basis of span(xc, yc)
  std::vector<double> u1 = xc, u2 = yc;
  const double c12 = dot(u2, u1) / dot(u1, u1);
  for (int i = 0; i < 20; ++i) u2[i] -= c12 * u1[i];
  for (const auto* u : {&u1, &u2}) {
    const double c = dot(z, *u) / dot(*u, *u);
    for (int i = 0; i < 20; ++i) z[i] -= c * (*u)[i];
  }
  const auto partial = partial_correlation(x, y, z);
  const auto plain = pearson(x, y);
  EXPECT_NEAR(partial.r, plain.r, 1e-12);
  EXPECT_NEAR(partial.p, t_two_sided_p(std::abs(partial.r) * std::sqrt(17.0 / (1 - partial.r * partial.r)), 17), 1e-14);
}

TEST(Partial, CovariateEqualToXIsDegenerate) {
  const std::vector<double> x{1, 3, 2, 5, 4, 6};
  EXPECT_SR_ERROR(partial_correlation(x, {2, 1, 4, 3, 6, 5}, x), ErrorCode::kDegenerateVariance);
}

TEST(Jackknife, PerfectLineRetainsAll) {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(5 - 0.5 * i);
  }
  const auto jk = jackknife_significance(x, y);
  EXPECT_EQ(jk.retained, 10u);
  EXPECT_EQ(jk.folds.size(), 10u);
}

TEST(Jackknife, PureNoiseRetainsFew) {
  std::mt19937_64 gen(10);
  double total = 0.0;
  for (int seed = 0; seed < 50; ++seed) total += jackknife_significance(noise(21, gen), noise(21, gen)).retained;
  EXPECT_LE(total / 50, 3.0);
}

TEST(Jackknife, FoldDropsOneObservation) {
  std::mt19937_64 gen(11);
  const auto x = noise(8, gen);
  const auto y = noise(8, gen);
  const auto jk = jackknife_significance(x, y);
  for (std::size_t i = 0; i < 8; ++i) {
    std::vector<double> xs = x, ys = y;
    xs.erase(xs.begin() + static_cast<long>(i));
    ys.erase(ys.begin() + static_cast<long>(i));
    EXPECT_NEAR(jk.folds[i].r, naive_r(xs, ys), 1e-12);
    EXPECT_EQ(jk.folds[i].n, 7u);
  }
}

TEST(SeedStability, ConstantValues) {
  const auto s = seed_stability({29.5, 29.5, 29.5});
  EXPECT_EQ(s.std, 0.0);
  EXPECT_EQ(s.cv, 0.0);
  EXPECT_EQ(s.ci95, 0.0);
}

TEST(SeedStability, TwoPointHandFormula) {
  const auto s = seed_stability({29.47, 29.59});
  const double sd = 0.12 / std::sqrt(2.0);
  EXPECT_NEAR(s.mean, 29.53, 1e-12);
  EXPECT_NEAR(s.std, sd, 1e-12);
  EXPECT_NEAR(s.cv, sd / 29.53, 1e-12);
  EXPECT_NEAR(s.ci95, 12.7062047 * sd / std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(s.ci95_normal, 1.96 * sd / std::sqrt(2.0), 1e-12);
}

TEST(Records, FixtureShape) {
  const Fixture f;
  ASSERT_EQ(f.records.size(), 21u);
  for (const char* key : kMetricKeys) EXPECT_EQ(f.col(key).size(), 21u);
  EXPECT_EQ(f.col("embed_dim").size(), 21u);
  EXPECT_FALSE(f.records[0].objective.empty());
}

TEST(Records, ParseErrors) {
  EXPECT_SR_ERROR(parse_records("model,arch,jer\nm,a,abc\n"), ErrorCode::kFormat);
  EXPECT_SR_ERROR(parse_records("name,arch,jer\nm,a,1\n"), ErrorCode::kFormat);
  EXPECT_SR_ERROR(parse_records("model,arch,jer\nm,a\n"), ErrorCode::kFormat);
  auto recs = parse_records("model,arch,jer\nm,a,1\nn,b,2\n");
  EXPECT_SR_ERROR(column(recs, "binding"), ErrorCode::kInvalidArgument);
  EXPECT_SR_ERROR(join_covariates(recs, parse_records("model,arch,embed_dim\nm,a,768\n")), ErrorCode::kInvalidArgument);
}

TEST(Records, CsvRoundTrip) {
  const Fixture f;
  const auto again = parse_records(records_to_csv(f.records));
  ASSERT_EQ(again.size(), f.records.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].name, f.records[i].name);
    EXPECT_EQ(again[i].metrics, f.records[i].metrics);
  }
}

TEST(FixtureStatistics, CorrelationTable) {
  const Fixture f;
  const auto binding = f.col("binding");
  const auto jer = pearson(f.col("jer"), binding);
  EXPECT_NEAR(jer.r, naive_r(f.col("jer"), binding), 1e-12);
  EXPECT_GE(jer.r, 0.60);
  EXPECT_LE(jer.r, 0.70);
  EXPECT_LE(jer.p, 0.005);
  EXPECT_LE(std::abs(pearson(f.col("g_pr"), binding).r), 0.05);
  const double giso = pearson(f.col("g_iso"), binding).r;
  EXPECT_GE(giso, 0.13);
  EXPECT_LE(giso, 0.23);
  const double liso = pearson(f.col("l_iso"), binding).r;
  EXPECT_GE(liso, 0.00);
  EXPECT_LE(liso, 0.10);
}

TEST(FixtureStatistics, JerPlusDiscRegression) {
  const Fixture f;
  const auto cols = std::vector<std::vector<double>>{f.col("jer"), f.col("disc")};
  const double r2 = ols_r2(cols, f.col("binding")).r2;
  const double loo = loo_cv_r2(cols, f.col("binding"));
  EXPECT_NEAR(r2, 0.74, 0.05);
  EXPECT_NEAR(loo, 0.65, 0.07);
  EXPECT_LE(loo, r2);
}

TEST(FixtureStatistics, PartialControllingForEmbedDim) {
  const Fixture f;
  const auto r = partial_correlation(f.col("jer"), f.col("binding"), f.col("embed_dim"));
  EXPECT_GE(r.r, 0.41);
  EXPECT_LE(r.r, 0.55);
  const auto jk = jackknife_significance(f.col("jer"), f.col("binding"), 0.05, f.col("embed_dim"));
  EXPECT_GE(jk.retained, 18u);
  EXPECT_LE(jk.retained, 20u);
}

}  // namespace
}  // namespace sensorank::stats
