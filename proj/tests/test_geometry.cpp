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
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <gtest/gtest.h>

#include "common/error.hpp"
#include "geometry/embedding.hpp"
#include "geometry/local_isotropy.hpp"
#include "geometry/spectrum.hpp"
#include "support/test_util.hpp"

namespace sensorank::geometry {
namespace {

using sensorank::testing::TempDir;

SingularSpectrum spec(std::vector<double> v) {
  return SingularSpectrum::from_values(std::move(v), SpectrumSource::kCovariance);
}

RowMatrix gaussian_rows(std::size_t n, std::size_t d, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  RowMatrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(gen);
  return m;
}

TEST(Functionals, FlatSpectrum) {
  const auto s = spec({1, 1, 1, 1});
  EXPECT_NEAR(participation_ratio(s, true, 4), 1.0, 1e-12);
  EXPECT_NEAR(isotropy_score(s), 0.75, 1e-12);
  EXPECT_NEAR(effective_rank_entropy(s), 4.0, 1e-12);
}

TEST(Functionals, RankOne) {
  EXPECT_NEAR(participation_ratio(spec({1, 0, 0, 0}), true, 4), 0.25, 1e-12);
  EXPECT_NEAR(isotropy_score(spec({1, 0, 0})), 0.0, 1e-12);
  EXPECT_NEAR(effective_rank_entropy(spec({1, 0, 0})), 1.0, 1e-12);
}

TEST(Functionals, HandEvaluatedCases) {
  EXPECT_NEAR(participation_ratio(spec({2, 1, 1}), false, 3), 16.0 / 6.0, 1e-12);
  EXPECT_NEAR(isotropy_score(spec({3, 1})), 0.25, 1e-12);
  // p = (1/2, 1/4, 1/4): H = 1.5 ln 2
  EXPECT_NEAR(effective_rank_entropy(spec({2, 1, 1})), std::pow(2.0, 1.5), 1e-12);
}

TEST(Functionals, AllZeroSpectrumRaises) {
  EXPECT_SR_ERROR(participation_ratio(spec({0, 0}), false, 2), ErrorCode::kAllZeroSpectrum);
  EXPECT_SR_ERROR(isotropy_score(spec({0, 0})), ErrorCode::kAllZeroSpectrum);
  EXPECT_SR_ERROR(effective_rank_entropy(spec({0})), ErrorCode::kAllZeroSpectrum);
  EXPECT_SR_ERROR(spec({1, -1}), ErrorCode::kInvalidArgument);
}

TEST(Functionals, ScaleInvariant) {
  const auto a = spec({5, 3, 2, 0.5});
  const auto b = spec({15, 9, 6, 1.5});
  EXPECT_NEAR(participation_ratio(a, true, 4), participation_ratio(b, true, 4), 1e-12);
  EXPECT_NEAR(isotropy_score(a), isotropy_score(b), 1e-12);
  EXPECT_NEAR(effective_rank_entropy(a), effective_rank_entropy(b), 1e-12);
}

TEST(Functionals, BoundsOnRandomSpectra) {
  std::mt19937_64 gen(7);
  std::exponential_distribution<double> ex(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 12;
    std::vector<double> v(d);
    for (double& x : v) x = ex(gen) * (trial % 3 == 0 ? 1e-3 : 1.0);
    const auto s = spec(v);
    const double pr = participation_ratio(s, true, d);
    const double iso = isotropy_score(s);
    const double er = effective_rank_entropy(s);
    EXPECT_GT(pr, 0.0);
    EXPECT_LE(pr, 1.0 + 1e-12);
    EXPECT_GE(iso, -1e-12);
    EXPECT_LE(iso, 1.0 - 1.0 / d + 1e-12);
    EXPECT_GE(er, 1.0 - 1e-12);
    EXPECT_LE(er, d + 1e-9);
  }
}

TEST(CovarianceSpectrum, TwoPointHandCovariance) {
  RowMatrix m(2, 2);
  m << 1, 0, -1, 0;
  const auto s = covariance_spectrum(m);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0], 2.0, 1e-12);
  EXPECT_NEAR(s.values[1], 0.0, 1e-12);
}

TEST(CovarianceSpectrum, IsotropicCloudIsFlat) {
  const auto s = covariance_spectrum(gaussian_rows(20000, 4, 3));
  ASSERT_EQ(s.values.size(), 4u);
  // sampling spread of eigenvalues at N=20000 is a few percent
  EXPECT_LT(s.values.front() / s.values.back(), 1.1);
  for (double v : s.values) EXPECT_NEAR(v, 1.0, 0.05);
}

TEST(CovarianceSpectrum, IdenticalRowsRaise) {
  RowMatrix m = RowMatrix::Constant(10, 3, 2.5);
  EXPECT_SR_ERROR(covariance_spectrum(m), ErrorCode::kAllZeroSpectrum);
}

TEST(CovarianceSpectrum, RotationInvariant) {
  const RowMatrix e = gaussian_rows(40, 6, 11);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian_rows(6, 6, 12)).householderQ();
  const RowMatrix rotated = e * q;
  const auto a = covariance_spectrum(e);
  const auto b = covariance_spectrum(rotated);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    EXPECT_NEAR(a.values[i], b.values[i], 1e-8 * a.values[0]);
}

TEST(CovarianceSpectrum, GramPathMatchesPrimal) {
  // N < D goes through the Gram matrix; compare with an explicit D x D covariance
  const RowMatrix e = gaussian_rows(5, 9, 4);
  const RowMatrix centered = e.rowwise() - e.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / 4.0;
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  const auto s = covariance_spectrum(e);
  ASSERT_EQ(s.values.size(), 9u);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.values[i], ev(i), 1e-10);
  for (int i = 5; i < 9; ++i) EXPECT_EQ(s.values[i], 0.0);
}

// Independent local isotropy oracle for 2-D data: sort all distances, take
// the k nearest non-anchor rows, closed-form 2x2 eigenvalues.
double brute_local_isotropy_2d(const RowMatrix& pts, const std::vector<std::size_t>& anchors, std::size_t k) {
  double total = 0.0;
  for (std::size_t a : anchors) {
    std::vector<std::pair<double, std::size_t>> d;
    for (Eigen::Index j = 0; j < pts.rows(); ++j) {
      if (static_cast<std::size_t>(j) == a) continue;
      d.emplace_back((pts.row(j) - pts.row(a)).squaredNorm(), j);
    }
    std::sort(d.begin(), d.end());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < k; ++i) {
      mx += pts(d[i].second, 0);
      my += pts(d[i].second, 1);
    }
    mx /= k;
    my /= k;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double dx = pts(d[i].second, 0) - mx;
      const double dy = pts(d[i].second, 1) - my;
      sxx += dx * dx;
      syy += dy * dy;
      sxy += dx * dy;
    }
    const double tr = sxx + syy;
    const double disc = std::sqrt((sxx - syy) * (sxx - syy) + 4 * sxy * sxy);
    const double l1 = (tr + disc) / 2;
    total += tr > 0 ? 1.0 - l1 / tr : 0.0;
  }
  return total / anchors.size();
}

TEST(LocalIsotropy, UniformDiskMatchesBruteForce) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix pts(500, 2);
  for (int i = 0; i < 500; ++i) {
    const double r = std::sqrt(u(gen));
    const double t = 2 * M_PI * u(gen);
    pts(i, 0) = r * std::cos(t);
    pts(i, 1) = r * std::sin(t);
  }
  LocalIsotropyConfig cfg;
  cfg.k = 16;
  cfg.n_anchors = 500;
  const auto result = local_isotropy(EmbeddingMatrix(pts), cfg);
  const double oracle = brute_local_isotropy_2d(pts, result.anchors, 16);
  EXPECT_NEAR(result.mean, oracle, 1e-10);
  // 16-point sample covariances are anisotropic on average; Monte-Carlo over
  // 50 such clouds gives 0.342 +- 0.007, below the 0.5 large-k limit
  EXPECT_NEAR(result.mean, 0.342, 0.03);
}

TEST(LocalIsotropy, IdenticalPointsScoreZero) {
  for (auto metric : {LocalMetric::kVariance, LocalMetric::kEffectiveRank, LocalMetric::kParticipationRatio}) {
    LocalIsotropyConfig cfg;
    cfg.k = 4;
    cfg.n_anchors = 10;
    cfg.metric = metric;
    EXPECT_EQ(local_isotropy(EmbeddingMatrix(RowMatrix::Constant(20, 3, 1.0)), cfg).mean, 0.0);
  }
}

TEST(LocalIsotropy, ScaleInvariant) {
  const RowMatrix e = gaussian_rows(200, 5, 8);
  LocalIsotropyConfig cfg;
  cfg.n_anchors = 50;
  for (auto metric : {LocalMetric::kVariance, LocalMetric::kEffectiveRank, LocalMetric::kParticipationRatio}) {
    cfg.metric = metric;
    const auto a = local_isotropy(EmbeddingMatrix(e), cfg);
    const auto b = local_isotropy(EmbeddingMatrix(RowMatrix(e * 7.5)), cfg);
    EXPECT_EQ(a.anchors, b.anchors);
    EXPECT_NEAR(a.mean, b.mean, 1e-12);
    for (std::size_t i = 0; i < a.anchors.size(); ++i)
      EXPECT_EQ(nearest_rows(e, a.anchors[i], 16, false), nearest_rows(e * 7.5, a.anchors[i], 16, false));
  }
}

TEST(LocalIsotropy, NearestRowsTieBreakAndAnchorExclusion) {
  RowMatrix m(5, 1);
  m << 0, 1, -1, 2, -2;
  EXPECT_EQ(nearest_rows(m, 0, 2, false), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(nearest_rows(m, 0, 3, true), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(LocalIsotropy, AnchorsAreSeededWithoutReplacement) {
  const auto a = sample_anchors(100, 40, 42);
  EXPECT_EQ(a, sample_anchors(100, 40, 42));
  EXPECT_NE(a, sample_anchors(100, 40, 43));
  std::vector<std::size_t> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_LT(sorted.back(), 100u);
}

TEST(LocalIsotropy, ErrorPaths) {
  LocalIsotropyConfig cfg;
  cfg.k = 16;
  cfg.n_anchors = 5;
  EXPECT_SR_ERROR(local_isotropy(EmbeddingMatrix(gaussian_rows(16, 3, 1)), cfg), ErrorCode::kInsufficientNeighbors);
  cfg.k = 4;
  cfg.n_anchors = 50;
  EXPECT_SR_ERROR(local_isotropy(EmbeddingMatrix(gaussian_rows(16, 3, 1)), cfg), ErrorCode::kInvalidArgument);
}

TEST(LocalIsotropy, SweepEmitsOneValuePerCell) {
  const EmbeddingMatrix e(gaussian_rows(120, 8, 5));
  const std::vector<LocalMetric> metrics{LocalMetric::kVariance, LocalMetric::kEffectiveRank,
                                         LocalMetric::kParticipationRatio};
  const auto cells = local_isotropy_sweep(e, {8, 16, 32}, metrics, 60, 42);
  ASSERT_EQ(cells.size(), 9u);
  for (const auto& c : cells) {
    EXPECT_TRUE(std::isfinite(c.value));
    LocalIsotropyConfig cfg;
    cfg.k = c.k;
    cfg.n_anchors = 60;
    cfg.metric = c.metric;
    EXPECT_DOUBLE_EQ(c.value, local_isotropy(e, cfg).mean);
  }
}

TEST(Emb1, RoundTripKeepsShapeIdsAndF32Values) {
  TempDir dir;
  RowMatrix v = gaussian_rows(7, 5, 9);
  std::vector<std::string> ids{"a", "b", "c", "img/x.png", "e", "f", "g"};
  write_emb1(dir / "e.emb", EmbeddingMatrix(v, ids));
  const auto back = read_emb1(dir / "e.emb");
  ASSERT_EQ(back.rows(), 7u);
  ASSERT_EQ(back.dim(), 5u);
  EXPECT_EQ(back.ids(), ids);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    EXPECT_EQ(back.values().data()[i], static_cast<double>(static_cast<float>(v.data()[i])));
  EXPECT_EQ(back.find("img/x.png"), 3);
  EXPECT_EQ(back.find("nope"), -1);
}

TEST(Emb1, LayoutIsLittleEndianHeaderThenRows) {
  TempDir dir;
  RowMatrix v(2, 3);
  v << 1, 2, 3, 4, 5, 6;
  write_emb1(dir / "e.emb", EmbeddingMatrix(v));
  const std::string bytes = sensorank::testing::slurp(dir / "e.emb");
  ASSERT_GE(bytes.size(), 12u + 24u);
  EXPECT_EQ(bytes.substr(0, 4), "EMB1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 3);
  float third;
  std::memcpy(&third, bytes.data() + 12 + 8, 4);
  EXPECT_EQ(third, 3.0f);
  EXPECT_EQ(bytes.substr(36), R"({"ids":["0","1"]})");
}

TEST(Emb1, TruncatedAndBadMagicAreFormatErrors) {
  TempDir dir;
  write_emb1(dir / "e.emb", EmbeddingMatrix(gaussian_rows(4, 4, 1)));
  std::string bytes = sensorank::testing::slurp(dir / "e.emb");
  std::ofstream(dir / "short.emb", std::ios::binary) << bytes.substr(0, 30);
  EXPECT_SR_ERROR(read_emb1(dir / "short.emb"), ErrorCode::kFormat);
  bytes[0] = 'X';
  std::ofstream(dir / "magic.emb", std::ios::binary) << bytes;
  EXPECT_SR_ERROR(read_emb1(dir / "magic.emb"), ErrorCode::kFormat);
  EXPECT_SR_ERROR(read_emb1(dir / "missing.emb"), ErrorCode::kIo);
}

TEST(EmbeddingCsv, LoadsAndDispatches) {
  TempDir dir;
  std::ofstream(dir / "e.csv") << "id,dim0,dim1\nq,1.5,-2\nr,0,3e-1\n";
  const auto e = load_embeddings(dir / "e.csv");
  ASSERT_EQ(e.rows(), 2u);
  ASSERT_EQ(e.dim(), 2u);
  EXPECT_EQ(e.ids(), (std::vector<std::string>{"q", "r"}));
  EXPECT_DOUBLE_EQ(e.values()(0, 1), -2.0);
  EXPECT_DOUBLE_EQ(e.values()(1, 1), 0.3);

  std::ofstream(dir / "bad.csv") << "id,dim0,dim2\nq,1,2\n";
  EXPECT_SR_ERROR(load_embeddings(dir / "bad.csv"), ErrorCode::kFormat);
  std::ofstream(dir / "ragged.csv") << "id,dim0,dim1\nq,1\n";
  EXPECT_SR_ERROR(load_embeddings(dir / "ragged.csv"), ErrorCode::kFormat);
}

TEST(EmbeddingMatrix, ValidateRejectsNonFinite) {
  RowMatrix v = gaussian_rows(3, 2, 1);
  v(1, 1) = std::nan("");
  EXPECT_SR_ERROR(EmbeddingMatrix(v).validate(), ErrorCode::kInvalidArgument);
  EXPECT_SR_ERROR(EmbeddingMatrix(gaussian_rows(3, 2, 1), {"a", "a", "b"}), ErrorCode::kFormat);
}

}  // namespace
}  // namespace sensorank::geometry
