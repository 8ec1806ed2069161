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

#ifndef SENSORANK_SENSORANK_H_
#define SENSORANK_SENSORANK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SR_API __declspec(dllexport)
#else
#define SR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
  SR_OK = 0,
  SR_INVALID_ARGUMENT = 1,
  SR_DIMENSION_MISMATCH = 2,
  SR_ALL_ZERO_SPECTRUM = 3,
  SR_INSUFFICIENT_NEIGHBORS = 4,
  SR_INSUFFICIENT_POOL = 5,
  SR_ZERO_VECTOR = 6,
  SR_DEGENERATE_LABELS = 7,
  SR_DEGENERATE_VARIANCE = 8,
  SR_SINGULAR_DESIGN = 9,
  SR_ORACLE_NUMERICAL_FAULT = 10,
  SR_CAPABILITY_MISSING = 11,
  SR_MANIFEST_MISMATCH = 12,
  SR_IO = 13,
  SR_FORMAT = 14,
  SR_ADAPTER_PROTOCOL = 15,
  SR_VERSION_MISMATCH = 16,
  SR_CONFIG = 17,
  SR_INTERNAL = 99
} sr_status;

typedef struct sr_embeddings sr_embeddings;
typedef struct sr_oracle sr_oracle;
typedef struct sr_manifest sr_manifest;

SR_API const char* sr_version(void);

/* Message of the last failing call on this thread, "" if none. */
SR_API const char* sr_last_error(void);
SR_API const char* sr_status_name(sr_status status);

/* Frees strings returned through char** out-parameters. */
SR_API void sr_string_free(char* s);

/* ---- commands ---------------------------------------------------------- */

/* JSON array of option descriptions for a command:
   [{section, key, flag, type, default, help, label}, ...]. */
SR_API sr_status sr_command_options(const char* command, char** json_out);

/* Non-configurable constants, as plain text for help output. */
SR_API sr_status sr_fixed_parameters(char** text_out);

/* Parses a run-config file into a JSON document {section: {key: value}}. */
SR_API sr_status sr_config_load(const char* path, char** json_out);

/* Resolves options (defaults, SENSORANK_SEED, config, flags) and runs the
   command. `config_json` and `flags_json` may be NULL. Flag values are
   strings or arrays of strings. The result JSON is returned in json_out. */
SR_API sr_status sr_command_run(const char* command, const char* config_json, const char* flags_json,
                                char** json_out);

/* Resolved TOML echo without running the command. */
SR_API sr_status sr_command_echo(const char* command, const char* config_json, const char* flags_json,
                                 char** toml_out);

/* ---- embeddings -------------------------------------------------------- */

SR_API sr_status sr_embeddings_load(const char* path, sr_embeddings** out);

/* Row-major n x d values. `ids` may be NULL ("0", "1", ...). */
SR_API sr_status sr_embeddings_create(const double* values, size_t n, size_t d, const char* const* ids,
                                      sr_embeddings** out);
SR_API sr_status sr_embeddings_save(const sr_embeddings* e, const char* path);
SR_API sr_status sr_embeddings_shape(const sr_embeddings* e, size_t* n, size_t* d);
SR_API void sr_embeddings_free(sr_embeddings* e);

/* Global geometry of the full matrix. Any out pointer may be NULL. */
SR_API sr_status sr_global_metrics(const sr_embeddings* e, double* pr_normalized, double* isotropy,
                                   double* effective_rank);

/* metric: "variance", "effective_rank" or "participation_ratio". */
SR_API sr_status sr_local_isotropy(const sr_embeddings* e, size_t k, size_t n_anchors, const char* metric,
                                   uint64_t seed, double* out);

/* ---- oracles ----------------------------------------------------------- */

/* spec: "builtin", "builtin:linear", "builtin:mlp" or "adapter:CMD".
   encoder_json: optional {"encoder": {...}} block overriding defaults. */
SR_API sr_status sr_oracle_open(const char* spec, const char* encoder_json, sr_oracle** out);
SR_API sr_status sr_oracle_dims(const sr_oracle* o, size_t* input_dim, size_t* output_dim);
SR_API sr_status sr_oracle_embed(const sr_oracle* o, const double* x, size_t x_len, double* out, size_t out_len);
SR_API sr_status sr_oracle_jvp(const sr_oracle* o, const double* x, const double* direction, size_t x_len,
                               double* out, size_t out_len);
SR_API sr_status sr_jer_mean(const sr_oracle* o, size_t n_images, size_t k, uint64_t seed, double* mean);
SR_API void sr_oracle_free(sr_oracle* o);

/* ---- probes and readouts ----------------------------------------------- */

/* kind: "binding" or "samediff". With out_dir NULL only the symbolic
   manifest is built. */
SR_API sr_status sr_manifest_generate(const char* kind, size_t n, uint64_t seed, const char* out_dir,
                                      sr_manifest** out);
SR_API sr_status sr_manifest_load(const char* path, sr_manifest** out);
SR_API sr_status sr_manifest_size(const sr_manifest* m, size_t* entries);
SR_API void sr_manifest_free(sr_manifest* m);

/* readout: "cosine", "knn" or "localpca"; the task follows the manifest
   kind. Result JSON: {task, readout, accuracy, n, threshold?, per_trial}. */
SR_API sr_status sr_evaluate(const sr_manifest* m, const sr_embeddings* e, const char* readout, char** json_out);

/* ---- statistics -------------------------------------------------------- */

SR_API sr_status sr_pearson(const double* x, const double* y, size_t n, double* r, double* p);
SR_API sr_status sr_partial_correlation(const double* x, const double* y, const double* z, size_t n, double* r,
                                        double* p);

/* `columns` holds m predictor columns of length n, column after column. */
SR_API sr_status sr_ols_r2(const double* columns, size_t n, size_t m, const double* y, double* r2);
SR_API sr_status sr_loo_cv_r2(const double* columns, size_t n, size_t m, const double* y, double* r2);

/* z may be NULL for plain Pearson folds. */
SR_API sr_status sr_jackknife(const double* x, const double* y, const double* z, size_t n, double alpha,
                              size_t* retained);
SR_API sr_status sr_seed_stability(const double* values, size_t n, double* mean, double* std, double* cv,
                                   double* ci95);

#ifdef __cplusplus
}
#endif

#endif  // SENSORANK_SENSORANK_H_
