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

#include "sensorank/sensorank.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "common/error.hpp"
#include "geometry/embedding.hpp"
#include "geometry/local_isotropy.hpp"
#include "geometry/spectrum.hpp"
#include "jacobian/estimator.hpp"
#include "pipeline/commands.hpp"
#include "pipeline/options.hpp"
#include "probegen/dataset.hpp"
#include "readout/readout.hpp"
#include "stats/correlation.hpp"

struct sr_embeddings {
  sensorank::geometry::EmbeddingMatrix matrix;
};
struct sr_oracle {
  std::unique_ptr<sensorank::jacobian::JvpOracle> oracle;
};
struct sr_manifest {
  sensorank::probegen::DatasetManifest manifest;
};

namespace {

using sensorank::Error;
using sensorank::ErrorCode;
using sensorank::pipeline::Json;

thread_local std::string g_last_error;

sr_status set_error(sr_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
sr_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return SR_OK;
  } catch (const Error& e) {
    return set_error(static_cast<sr_status>(e.code()), e.what());
  } catch (const Json::exception& e) {
    return set_error(SR_CONFIG, std::string("invalid JSON argument: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SR_INTERNAL, e.what());
  } catch (...) {
    return set_error(SR_INTERNAL, "unknown exception");
  }
}

void need(const void* p, const char* name) {
  sensorank::require(p != nullptr, ErrorCode::kInvalidArgument, std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Json parse_optional(const char* text) { return text && *text ? Json::parse(text) : Json(); }

std::vector<double> vec(const double* p, std::size_t n) { return {p, p + n}; }

std::vector<std::vector<double>> columns_of(const double* columns, std::size_t n, std::size_t m) {
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < m; ++c) out.push_back(vec(columns + c * n, n));
  return out;
}

Eigen::VectorXd to_vector(const double* p, std::size_t n) {
  return Eigen::Map<const Eigen::VectorXd>(p, static_cast<Eigen::Index>(n));
}

void copy_out(const Eigen::VectorXd& v, double* out, std::size_t out_len) {
  sensorank::require(static_cast<std::size_t>(v.size()) == out_len, ErrorCode::kDimensionMismatch,
                     "output buffer has " + std::to_string(out_len) + " slots, result has " +
                         std::to_string(v.size()));
  std::memcpy(out, v.data(), out_len * sizeof(double));
}

const char* type_name(sensorank::pipeline::OptionType t) {
  using T = sensorank::pipeline::OptionType;
  switch (t) {
    case T::kUint: return "uint";
    case T::kFloat: return "float";
    case T::kString: return "string";
    case T::kBool: return "bool";
    case T::kUintList: return "uint_list";
    case T::kFloatList: return "float_list";
    case T::kStringList: return "string_list";
  }
  return "?";
}

}  // namespace

extern "C" {

const char* sr_version(void) { return SENSORANK_VERSION; }

const char* sr_last_error(void) { return g_last_error.c_str(); }

const char* sr_status_name(sr_status status) {
  return sensorank::error_code_name(static_cast<ErrorCode>(status)).data();
}

void sr_string_free(char* s) { std::free(s); }

sr_status sr_command_options(const char* command, char** json_out) {
  return guarded([&] {
    need(command, "command");
    need(json_out, "json_out");
    Json arr = Json::array();
    for (const auto& s : sensorank::pipeline::command_options(command))
      arr.push_back({{"section", s.section},
                     {"key", s.key},
                     {"flag", sensorank::pipeline::flag_name(s)},
                     {"type", type_name(s.type)},
                     {"default", s.default_value},
                     {"help", s.help},
                     {"label", s.label}});
    *json_out = dup_string(arr.dump());
  });
}

sr_status sr_fixed_parameters(char** text_out) {
  return guarded([&] {
    need(text_out, "text_out");
    *text_out = dup_string(sensorank::pipeline::fixed_parameters_text());
  });
}

sr_status sr_config_load(const char* path, char** json_out) {
  return guarded([&] {
    need(path, "path");
    need(json_out, "json_out");
    *json_out = dup_string(sensorank::pipeline::load_config(path).dump());
  });
}

sr_status sr_command_run(const char* command, const char* config_json, const char* flags_json, char** json_out) {
  return guarded([&] {
    need(command, "command");
    need(json_out, "json_out");
    const Json resolved =
        sensorank::pipeline::resolve_options(command, parse_optional(config_json), parse_optional(flags_json));
    *json_out = dup_string(sensorank::pipeline::run_command(command, resolved).dump(2));
  });
}

sr_status sr_command_echo(const char* command, const char* config_json, const char* flags_json, char** toml_out) {
  return guarded([&] {
    need(command, "command");
    need(toml_out, "toml_out");
    const Json resolved =
        sensorank::pipeline::resolve_options(command, parse_optional(config_json), parse_optional(flags_json));
    *toml_out = dup_string(sensorank::pipeline::echo_config(command, resolved));
  });
}

sr_status sr_embeddings_load(const char* path, sr_embeddings** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sr_embeddings{sensorank::geometry::load_embeddings(path)};
  });
}

sr_status sr_embeddings_create(const double* values, size_t n, size_t d, const char* const* ids,
                               sr_embeddings** out) {
  return guarded([&] {
    need(values, "values");
    need(out, "out");
    sensorank::geometry::RowMatrix m =
        Eigen::Map<const sensorank::geometry::RowMatrix>(values, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    if (ids) {
      std::vector<std::string> names;
      for (size_t i = 0; i < n; ++i) {
        need(ids[i], "ids[i]");
        names.emplace_back(ids[i]);
      }
      *out = new sr_embeddings{sensorank::geometry::EmbeddingMatrix(std::move(m), std::move(names))};
    } else {
      *out = new sr_embeddings{sensorank::geometry::EmbeddingMatrix(std::move(m))};
    }
  });
}

sr_status sr_embeddings_save(const sr_embeddings* e, const char* path) {
  return guarded([&] {
    need(e, "embeddings");
    need(path, "path");
    sensorank::geometry::write_emb1(path, e->matrix);
  });
}

sr_status sr_embeddings_shape(const sr_embeddings* e, size_t* n, size_t* d) {
  return guarded([&] {
    need(e, "embeddings");
    if (n) *n = e->matrix.rows();
    if (d) *d = e->matrix.dim();
  });
}

void sr_embeddings_free(sr_embeddings* e) { delete e; }

sr_status sr_global_metrics(const sr_embeddings* e, double* pr_normalized, double* isotropy, double* effective_rank) {
  return guarded([&] {
    need(e, "embeddings");
    e->matrix.validate(2);
    const auto s = sensorank::geometry::covariance_spectrum(e->matrix);
    if (pr_normalized) *pr_normalized = sensorank::geometry::participation_ratio(s, true, e->matrix.dim());
    if (isotropy) *isotropy = sensorank::geometry::isotropy_score(s);
    if (effective_rank) *effective_rank = sensorank::geometry::effective_rank_entropy(s);
  });
}

sr_status sr_local_isotropy(const sr_embeddings* e, size_t k, size_t n_anchors, const char* metric, uint64_t seed,
                            double* out) {
  return guarded([&] {
    need(e, "embeddings");
    need(out, "out");
    sensorank::geometry::LocalIsotropyConfig c;
    c.k = k;
    c.n_anchors = n_anchors;
    c.seed = seed;
    if (metric) {
      const auto m = sensorank::geometry::parse_local_metric(metric);
      sensorank::require(m.has_value(), ErrorCode::kInvalidArgument, std::string("unknown local metric '") + metric + "'");
      c.metric = *m;
    }
    *out = sensorank::geometry::local_isotropy(e->matrix, c).mean;
  });
}

sr_status sr_oracle_open(const char* spec, const char* encoder_json, sr_oracle** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    const Json resolved = sensorank::pipeline::resolve_options("jer", parse_optional(encoder_json), Json());
    *out = new sr_oracle{sensorank::pipeline::open_oracle(spec, resolved.at("encoder"))};
  });
}

sr_status sr_oracle_dims(const sr_oracle* o, size_t* input_dim, size_t* output_dim) {
  return guarded([&] {
    need(o, "oracle");
    if (input_dim) *input_dim = o->oracle->input_shape().size();
    if (output_dim) *output_dim = o->oracle->output_dim();
  });
}

sr_status sr_oracle_embed(const sr_oracle* o, const double* x, size_t x_len, double* out, size_t out_len) {
  return guarded([&] {
    need(o, "oracle");
    need(x, "x");
    need(out, "out");
    sensorank::require(x_len == o->oracle->input_shape().size(), ErrorCode::kDimensionMismatch,
                       "input length does not match the oracle input shape");
    copy_out(o->oracle->embed(to_vector(x, x_len)), out, out_len);
  });
}

sr_status sr_oracle_jvp(const sr_oracle* o, const double* x, const double* direction, size_t x_len, double* out,
                        size_t out_len) {
  return guarded([&] {
    need(o, "oracle");
    need(x, "x");
    need(direction, "direction");
    need(out, "out");
    sensorank::require(x_len == o->oracle->input_shape().size(), ErrorCode::kDimensionMismatch,
                       "input length does not match the oracle input shape");
    copy_out(o->oracle->jvp(to_vector(x, x_len), to_vector(direction, x_len)), out, out_len);
  });
}

sr_status sr_jer_mean(const sr_oracle* o, size_t n_images, size_t k, uint64_t seed, double* mean) {
  return guarded([&] {
    need(o, "oracle");
    need(mean, "mean");
    sensorank::jacobian::JerConfig c;
    c.n_images = n_images;
    c.k = k;
    c.seed = seed;
    *mean = sensorank::jacobian::jer_mean(*o->oracle, c).mean;
  });
}

void sr_oracle_free(sr_oracle* o) { delete o; }

sr_status sr_manifest_generate(const char* kind, size_t n, uint64_t seed, const char* out_dir, sr_manifest** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    const auto k = sensorank::probegen::parse_dataset_kind(kind);
    sensorank::require(k.has_value(), ErrorCode::kInvalidArgument, std::string("unknown dataset kind '") + kind + "'");
    *out = new sr_manifest{out_dir ? sensorank::probegen::gen_dataset(*k, n, seed, out_dir)
                                   : sensorank::probegen::build_manifest(*k, n, seed)};
  });
}

sr_status sr_manifest_load(const char* path, sr_manifest** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sr_manifest{sensorank::probegen::load_manifest(path)};
  });
}

sr_status sr_manifest_size(const sr_manifest* m, size_t* entries) {
  return guarded([&] {
    need(m, "manifest");
    need(entries, "entries");
    *entries = m->manifest.entries.size();
  });
}

void sr_manifest_free(sr_manifest* m) { delete m; }

sr_status sr_evaluate(const sr_manifest* m, const sr_embeddings* e, const char* readout, char** json_out) {
  return guarded([&] {
    need(m, "manifest");
    need(e, "embeddings");
    need(json_out, "json_out");
    sensorank::readout::ReadoutConfig c;
    if (readout) {
      const auto k = sensorank::readout::parse_readout_kind(readout);
      sensorank::require(k.has_value(), ErrorCode::kInvalidArgument, std::string("unknown readout '") + readout + "'");
      c.kind = *k;
    }
    const auto r = m->manifest.kind == sensorank::probegen::DatasetKind::kBinding
                       ? sensorank::readout::eval_binding(m->manifest, e->matrix, c)
                       : sensorank::readout::eval_samediff(m->manifest, e->matrix, c);
    *json_out = dup_string(sensorank::readout::result_to_json(r));
  });
}

sr_status sr_pearson(const double* x, const double* y, size_t n, double* r, double* p) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    const auto res = sensorank::stats::pearson(vec(x, n), vec(y, n));
    if (r) *r = res.r;
    if (p) *p = res.p;
  });
}

sr_status sr_partial_correlation(const double* x, const double* y, const double* z, size_t n, double* r, double* p) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(z, "z");
    const auto res = sensorank::stats::partial_correlation(vec(x, n), vec(y, n), vec(z, n));
    if (r) *r = res.r;
    if (p) *p = res.p;
  });
}

sr_status sr_ols_r2(const double* columns, size_t n, size_t m, const double* y, double* r2) {
  return guarded([&] {
    need(columns, "columns");
    need(y, "y");
    need(r2, "r2");
    *r2 = sensorank::stats::ols_r2(columns_of(columns, n, m), vec(y, n)).r2;
  });
}

sr_status sr_loo_cv_r2(const double* columns, size_t n, size_t m, const double* y, double* r2) {
  return guarded([&] {
    need(columns, "columns");
    need(y, "y");
    need(r2, "r2");
    *r2 = sensorank::stats::loo_cv_r2(columns_of(columns, n, m), vec(y, n));
  });
}

sr_status sr_jackknife(const double* x, const double* y, const double* z, size_t n, double alpha, size_t* retained) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(retained, "retained");
    std::optional<std::vector<double>> zz;
    if (z) zz = vec(z, n);
    *retained = sensorank::stats::jackknife_significance(vec(x, n), vec(y, n), alpha, zz).retained;
  });
}

sr_status sr_seed_stability(const double* values, size_t n, double* mean, double* std, double* cv, double* ci95) {
  return guarded([&] {
    need(values, "values");
    const auto s = sensorank::stats::seed_stability(vec(values, n));
    if (mean) *mean = s.mean;
    if (std) *std = s.std;
    if (cv) *cv = s.cv;
    if (ci95) *ci95 = s.ci95;
  });
}

}  // extern "C"
