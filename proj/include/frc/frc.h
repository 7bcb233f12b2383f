// Copyright 2026 The frcopt Authors
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

/* C interface to the frcopt library.
 *
 * All functions return an frc_status. On failure a message describing the
 * problem is available from frc_last_error() on the calling thread until
 * the next call into the library from that thread. Handles are opaque and
 * owned by the caller; release them with the matching *_destroy function.
 * Strings returned through char** are released with frc_string_free.
 */
#ifndef FRC_FRC_H
#define FRC_FRC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FRC_BUILDING_LIBRARY)
#    define FRC_API __declspec(dllexport)
#  else
#    define FRC_API __declspec(dllimport)
#  endif
#else
#  define FRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum frc_status {
  FRC_OK = 0,
  FRC_ERR_INVALID_ARGUMENT = 1,
  FRC_ERR_CONFIG = 2,
  FRC_ERR_IO = 3,
  FRC_ERR_NUMERIC = 4,
  FRC_ERR_VERSION = 5,
  FRC_ERR_INTERNAL = 6
} frc_status;

typedef struct frc_config frc_config;
typedef struct frc_run frc_run;
typedef struct frc_field frc_field;

typedef struct frc_epoch_info {
  int epoch;
  double J;
  double J_scaled;
  double g_m;
  double g_f;
  double L;
  double alpha;
  double p;
  double dw_norm;
  double wall_ms;
} frc_epoch_info;

typedef void (*frc_epoch_callback)(const frc_epoch_info* info, void* user_data);

typedef struct frc_summary {
  double J;
  double J0;
  double g_m;
  double g_f;
  double L;
  int epochs;
  int converged;
  double wall_seconds;
} frc_summary;

typedef struct frc_sample {
  double rho_m;
  double rho_f;
  double theta;
} frc_sample;

typedef struct frc_extraction_params {
  double thickness;
  double step;
  double void_threshold;
  int max_points;
  double min_seed_deficit;
} frc_extraction_params;

FRC_API const char* frc_version(void);
FRC_API const char* frc_last_error(void);
FRC_API const char* frc_status_string(frc_status status);
FRC_API void frc_string_free(char* s);

/* Configuration. */
FRC_API frc_status frc_config_default(const char* problem, frc_config** out);
FRC_API frc_status frc_config_load(const char* path, frc_config** out);
FRC_API frc_status frc_config_parse(const char* json_text, frc_config** out);
/* "key=value"; see the README for key resolution. */
FRC_API frc_status frc_config_override(frc_config* cfg, const char* assignment);
FRC_API frc_status frc_config_set_seed(frc_config* cfg, uint64_t seed);
FRC_API frc_status frc_config_set_max_epochs(frc_config* cfg, int max_epochs);
FRC_API frc_status frc_config_set_output_dir(frc_config* cfg, const char* dir);
FRC_API frc_status frc_config_output_dir(const frc_config* cfg, char** out);
FRC_API frc_status frc_config_extraction(const frc_config* cfg, frc_extraction_params* out);
FRC_API frc_status frc_config_field_resolution(const frc_config* cfg, int* out);
FRC_API frc_status frc_config_to_json(const frc_config* cfg, char** out);
/* Newline-separated list of every problem in the file; empty when valid. */
FRC_API frc_status frc_config_check_file(const char* path, const char* const* overrides,
                                         size_t num_overrides, char** messages);
FRC_API void frc_config_destroy(frc_config* cfg);

/* Optimization. */
FRC_API frc_status frc_optimize(const frc_config* cfg, frc_epoch_callback callback, void* user_data,
                                frc_run** out);
FRC_API frc_status frc_run_summary(const frc_run* run, frc_summary* out);
/* Writes every artifact into dir; *summary_json (optional) receives summary.json. */
FRC_API frc_status frc_run_write_artifacts(const frc_run* run, const char* dir, char** summary_json);
FRC_API frc_status frc_run_field(const frc_run* run, frc_field** out);
FRC_API void frc_run_destroy(frc_run* run);

/* Trained fields. */
FRC_API frc_status frc_field_load(const char* checkpoint_path, frc_field** out);
FRC_API frc_status frc_field_query(const frc_field* field, double x, double y, frc_sample* out);
FRC_API void frc_field_destroy(frc_field* field);

/* Fiber extraction from a checkpoint. params may be NULL for the values
 * stored with the checkpoint; otherwise any non-positive field (negative for
 * void_threshold) keeps the stored value. resolution <= 0 likewise. */
FRC_API frc_status frc_extract(const char* checkpoint_path, const frc_extraction_params* params,
                               int resolution, const char* out_dir, size_t* num_tracks);

/* Parameter study over V_m x r_f; writes a CSV and returns the row count.
 * *warnings (optional) receives newline-separated notices. */
FRC_API frc_status frc_sweep(const frc_config* cfg, const double* V_m, size_t num_V_m,
                             const double* r_f, size_t num_r_f, const char* csv_path, size_t* rows,
                             char** warnings);

/* Per-phase timings for fixed-length runs on each (nelx[i], nely[i]) mesh. */
FRC_API frc_status frc_benchmark(const frc_config* cfg, const int* nelx, const int* nely,
                                 size_t num_meshes, int iterations, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* FRC_FRC_H */
