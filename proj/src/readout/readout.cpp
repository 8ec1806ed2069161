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

#include "readout/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "common/parallel.hpp"

namespace sensorank::readout {
namespace {

Selection select_from_scores(const std::array<double, 4>& scores, int target_index) {
  Selection s;
  s.scores = scores;
  const double best = *std::max_element(scores.begin(), scores.end());
  int count = 0;
  for (int i = 3; i >= 0; --i)
    if (scores[i] == best) {
      s.index = i;
      ++count;
    }
  s.tie = count > 1;
  double best_distractor = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    if (i != target_index) best_distractor = std::max(best_distractor, scores[i]);
  s.margin = scores[target_index] - best_distractor;
  return s;
}

std::string slot_name(int slot) { return slot < 0 ? "query" : "candidate " + std::to_string(slot); }

double checked_norm(const Eigen::VectorXd& v, int slot) {
  const double n = v.norm();
  require(n > 0.0, ErrorCode::kZeroVector, "zero-norm embedding for " + slot_name(slot));
  return n;
}

double jaccard(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double projected_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

Eigen::VectorXd row_of(const geometry::EmbeddingMatrix& e, const std::string& id) {
  return e.values().row(e.find(id)).transpose();
}

void check_ids(const probegen::DatasetManifest& manifest, const geometry::EmbeddingMatrix& embeddings) {
  std::vector<std::string> missing;
  for (const auto& entry : manifest.entries)
    for (const auto& id : entry.image_ids)
      if (embeddings.find(id) < 0) missing.push_back(id);
  if (missing.empty()) return;
  std::string msg = std::to_string(missing.size()) + " manifest image ids missing from embeddings:";
  for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
  if (missing.size() > 20) msg += " ...";
  fail(ErrorCode::kManifestMismatch, msg);
}

geometry::RowMatrix manifest_pool(const probegen::DatasetManifest& manifest, const geometry::EmbeddingMatrix& e) {
  std::size_t count = 0;
  for (const auto& entry : manifest.entries) count += entry.image_ids.size();
  geometry::RowMatrix rows(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(e.dim()));
  Eigen::Index r = 0;
  for (const auto& entry : manifest.entries)
    for (const auto& id : entry.image_ids) rows.row(r++) = e.values().row(e.find(id));
  return rows;
}

std::unique_ptr<NeighborPool> make_pool(const probegen::DatasetManifest& manifest,
                                        const geometry::EmbeddingMatrix& embeddings, const ReadoutConfig& config) {
  if (config.kind == ReadoutKind::kCosine) return nullptr;
  if (config.pool) {
    require(config.pool->dim() == embeddings.dim(), ErrorCode::kDimensionMismatch,
            "reference pool dimension does not match the embeddings");
    return std::make_unique<NeighborPool>(config.pool->values());
  }
  return std::make_unique<NeighborPool>(manifest_pool(manifest, embeddings));
}

}  // namespace

std::string_view readout_kind_name(ReadoutKind k) noexcept {
  switch (k) {
    case ReadoutKind::kCosine: return "cosine";
    case ReadoutKind::kKnn: return "knn";
    case ReadoutKind::kLocalPca: return "localpca";
  }
  return "?";
}

std::optional<ReadoutKind> parse_readout_kind(std::string_view name) noexcept {
  for (auto k : {ReadoutKind::kCosine, ReadoutKind::kKnn, ReadoutKind::kLocalPca})
    if (readout_kind_name(k) == name) return k;
  return std::nullopt;
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch, "cosine of vectors with different lengths");
  return a.dot(b) / (checked_norm(a, -1) * checked_norm(b, 0));
}

Selection cosine_select(const TrialEmbeddings& trial) {
  const double qn = checked_norm(trial.query, -1);
  std::array<double, 4> scores{};
  for (int i = 0; i < 4; ++i) {
    const auto& c = trial.candidates[i];
    require(c.size() == trial.query.size(), ErrorCode::kDimensionMismatch, "candidate length mismatch");
    scores[i] = trial.query.dot(c) / (qn * checked_norm(c, i));
  }
  return select_from_scores(scores, trial.target_index);
}

NeighborPool::NeighborPool(const geometry::RowMatrix& rows) : raw_(rows), unit_(rows) {
  for (Eigen::Index i = 0; i < unit_.rows(); ++i) {
    const double n = unit_.row(i).norm();
    if (n > 0.0) unit_.row(i) /= n;
  }
}

std::vector<std::size_t> NeighborPool::nearest(const Eigen::VectorXd& v, std::size_t k) const {
  require(static_cast<std::size_t>(v.size()) == dim(), ErrorCode::kDimensionMismatch, "pool query length mismatch");
  const double n = v.norm();
  const Eigen::VectorXd sims = n > 0.0 ? Eigen::VectorXd(unit_ * (v / n)) : Eigen::VectorXd::Zero(unit_.rows());
  std::vector<std::pair<double, std::size_t>> order(size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = {1.0 - sims(static_cast<Eigen::Index>(i)), i};
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = order[i].second;
  std::sort(out.begin(), out.end());
  return out;
}

Selection knn_select(const TrialEmbeddings& trial, const NeighborPool& pool, std::size_t k) {
  require(pool.size() > k, ErrorCode::kInsufficientPool,
          "kNN readout needs more than k=" + std::to_string(k) + " pool rows, got " + std::to_string(pool.size()));
  const auto qn = pool.nearest(trial.query, k);
  std::array<double, 4> scores{};
  for (int i = 0; i < 4; ++i) scores[i] = jaccard(qn, pool.nearest(trial.candidates[i], k));
  return select_from_scores(scores, trial.target_index);
}

LocalBasis local_pca_basis(const Eigen::VectorXd& center, const NeighborPool& pool, std::size_t components,
                           std::size_t neighborhood) {
  require(components >= 1, ErrorCode::kInvalidArgument, "local PCA needs at least one component");
  require(neighborhood >= 2, ErrorCode::kInvalidArgument, "local PCA neighborhood must be >= 2");
  require(pool.size() > neighborhood, ErrorCode::kInsufficientPool,
          "local PCA needs more than " + std::to_string(neighborhood) + " pool rows, got " +
              std::to_string(pool.size()));

  const auto idx = pool.nearest(center, neighborhood);
  Eigen::MatrixXd hood(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(pool.dim()));
  for (std::size_t r = 0; r < idx.size(); ++r)
    hood.row(static_cast<Eigen::Index>(r)) = pool.raw().row(static_cast<Eigen::Index>(idx[r]));
  const Eigen::MatrixXd centered = hood.rowwise() - hood.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(hood.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  require(solver.info() == Eigen::Success, ErrorCode::kInternal, "local PCA eigensolver did not converge");

  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  const Eigen::Index d = ev.size();
  const double top = ev(d - 1);
  Eigen::Index rank = 0;
  for (Eigen::Index i = d - 1; i >= 0 && top > 0.0 && ev(i) > 1e-12 * top; --i) ++rank;

  LocalBasis out;
  const Eigen::Index r = std::min<Eigen::Index>(rank, static_cast<Eigen::Index>(components));
  out.rank_deficient = r < static_cast<Eigen::Index>(components);
  out.basis.resize(d, r);
  for (Eigen::Index j = 0; j < r; ++j) out.basis.col(j) = solver.eigenvectors().col(d - 1 - j);
  return out;
}

Selection localpca_select(const TrialEmbeddings& trial, const NeighborPool& pool, std::size_t components,
                          std::size_t neighborhood, bool* rank_deficient) {
  const LocalBasis lb = local_pca_basis(trial.query, pool, components, neighborhood);
  if (rank_deficient) *rank_deficient = lb.rank_deficient;
  const Eigen::VectorXd q = lb.basis.transpose() * trial.query;
  std::array<double, 4> scores{};
  for (int i = 0; i < 4; ++i) scores[i] = projected_cosine(q, lb.basis.transpose() * trial.candidates[i]);
  return select_from_scores(scores, trial.target_index);
}

double percentile_sorted(const std::vector<double>& sorted, double pct) {
  require(!sorted.empty(), ErrorCode::kInvalidArgument, "percentile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * pct / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

ThresholdResult samediff_accuracy(const std::vector<double>& distances, const std::vector<bool>& is_same) {
  require(distances.size() == is_same.size(), ErrorCode::kDimensionMismatch, "distance and label counts differ");
  require(distances.size() >= 2, ErrorCode::kInvalidArgument, "need at least two pairs");
  const auto n_same = static_cast<std::size_t>(std::count(is_same.begin(), is_same.end(), true));
  require(n_same > 0 && n_same < is_same.size(), ErrorCode::kDegenerateLabels, "labels contain a single class");

  std::vector<double> sorted = distances;
  std::sort(sorted.begin(), sorted.end());

  ThresholdResult best{-1.0, 0.0};
  for (int step = 0; step <= 20; ++step) {
    const double tau = percentile_sorted(sorted, 5.0 * step);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < distances.size(); ++i)
      if ((distances[i] < tau) == is_same[i]) ++correct;
    const double acc = static_cast<double>(correct) / static_cast<double>(distances.size());
    if (acc > best.accuracy || (acc == best.accuracy && tau < best.threshold)) best = {acc, tau};
  }
  return best;
}

ReadoutResult eval_binding(const probegen::DatasetManifest& manifest, const geometry::EmbeddingMatrix& embeddings,
                           const ReadoutConfig& config) {
  require(manifest.kind == probegen::DatasetKind::kBinding, ErrorCode::kInvalidArgument,
          "eval_binding needs a binding manifest");
  require(!manifest.entries.empty(), ErrorCode::kInvalidArgument, "manifest has no entries");
  check_ids(manifest, embeddings);
  const auto pool = make_pool(manifest, embeddings, config);

  ReadoutResult result;
  result.task = "binding";
  result.kind = config.kind;
  result.n = manifest.entries.size();
  result.per_trial.resize(result.n);
  std::vector<char> deficient(result.n, 0);

  parallel_for(result.n, true, [&](std::size_t t) {
    const auto& entry = manifest.entries[t];
    TrialEmbeddings trial;
    trial.query = row_of(embeddings, entry.image_ids[0]);
    for (int c = 0; c < 4; ++c) trial.candidates[c] = row_of(embeddings, entry.image_ids[c + 1]);
    trial.target_index = *entry.target_index;

    Selection sel;
    try {
      switch (config.kind) {
        case ReadoutKind::kCosine: sel = cosine_select(trial); break;
        case ReadoutKind::kKnn: sel = knn_select(trial, *pool, config.knn_k); break;
        case ReadoutKind::kLocalPca: {
          bool def = false;
          sel = localpca_select(trial, *pool, config.components, config.neighborhood, &def);
          deficient[t] = def;
          break;
        }
      }
    } catch (const Error& e) {
      fail(e.code(), "trial '" + entry.id + "': " + e.what());
    }
    result.per_trial[t] = {entry.id, std::to_string(sel.index), sel.index == trial.target_index, sel.margin, sel.tie};
  });

  std::size_t correct = 0;
  std::size_t n_deficient = 0;
  for (std::size_t t = 0; t < result.n; ++t) {
    correct += result.per_trial[t].correct;
    result.tie_count += result.per_trial[t].tie;
    n_deficient += deficient[t];
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(result.n);
  if (n_deficient > 0)
    result.warnings.push_back("local PCA basis rank below " + std::to_string(config.components) + " components in " +
                              std::to_string(n_deficient) + " trials; used available rank");
  return result;
}

ReadoutResult eval_samediff(const probegen::DatasetManifest& manifest, const geometry::EmbeddingMatrix& embeddings,
                            const ReadoutConfig& config) {
  require(manifest.kind == probegen::DatasetKind::kSameDiff, ErrorCode::kInvalidArgument,
          "eval_samediff needs a samediff manifest");
  check_ids(manifest, embeddings);
  const auto pool = make_pool(manifest, embeddings, config);

  const std::size_t n = manifest.entries.size();
  std::vector<double> distances(n);
  std::vector<bool> is_same(n);
  std::vector<char> deficient(n, 0);
  parallel_for(n, true, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    const Eigen::VectorXd a = row_of(embeddings, entry.image_ids[0]);
    const Eigen::VectorXd b = row_of(embeddings, entry.image_ids[1]);
    switch (config.kind) {
      case ReadoutKind::kCosine: distances[i] = 1.0 - cosine_similarity(a, b); break;
      case ReadoutKind::kKnn:
        require(pool->size() > config.knn_k, ErrorCode::kInsufficientPool, "kNN pool too small");
        distances[i] = 1.0 - jaccard(pool->nearest(a, config.knn_k), pool->nearest(b, config.knn_k));
        break;
      case ReadoutKind::kLocalPca: {
        const LocalBasis lb = local_pca_basis(a, *pool, config.components, config.neighborhood);
        deficient[i] = lb.rank_deficient;
        distances[i] = 1.0 - projected_cosine(lb.basis.transpose() * a, lb.basis.transpose() * b);
        break;
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i) is_same[i] = *manifest.entries[i].label == probegen::SameDiffLabel::kSame;

  const ThresholdResult best = samediff_accuracy(distances, is_same);
  ReadoutResult result;
  result.task = "samediff";
  result.kind = config.kind;
  result.n = n;
  result.accuracy = best.accuracy;
  result.threshold = best.threshold;
  result.per_trial.resize(n);
  std::size_t n_deficient = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool predicted_same = distances[i] < best.threshold;
    result.per_trial[i] = {manifest.entries[i].id, predicted_same ? "same" : "different",
                           predicted_same == is_same[i], best.threshold - distances[i], false};
    n_deficient += deficient[i];
  }
  if (n_deficient > 0)
    result.warnings.push_back("local PCA basis rank below " + std::to_string(config.components) + " components in " +
                              std::to_string(n_deficient) + " pairs; used available rank");
  return result;
}

std::string result_to_json(const ReadoutResult& r) {
  nlohmann::ordered_json j{{"task", r.task}, {"readout", readout_kind_name(r.kind)}, {"accuracy", r.accuracy},
                           {"n", r.n}};
  if (r.threshold) j["threshold"] = *r.threshold;
  j["tie_count"] = r.tie_count;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  auto trials = nlohmann::ordered_json::array();
  for (const auto& t : r.per_trial)
    trials.push_back({{"id", t.id}, {"selected", t.selected}, {"correct", t.correct}, {"margin", t.margin},
                      {"tie", t.tie}});
  j["per_trial"] = std::move(trials);
  return j.dump(2);
}

}  // namespace sensorank::readout
