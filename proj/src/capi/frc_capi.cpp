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

#include "frc/frc.h"

#include "frc/commands.hpp"
#include "frc/config.hpp"
#include "frc/error.hpp"
#include "frc/io.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

struct frc_config {
  frc::app::RunConfig cfg;
};

struct frc_run {
  frc::app::RunConfig cfg;
  frc::opt::RunResult result;
};

struct frc_field {
  frc::nn::NeuralField field;
};

namespace {

thread_local std::string g_last_error;

frc_status fail(frc_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps library exceptions onto status codes.
template <typename F>
frc_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return FRC_OK;
  } catch (const frc::ConfigError& e) {
    return fail(FRC_ERR_CONFIG, e.what());
  } catch (const frc::VersionError& e) {
    return fail(FRC_ERR_VERSION, e.what());
  } catch (const frc::IoError& e) {
    return fail(FRC_ERR_IO, e.what());
  } catch (const frc::NumericError& e) {
    return fail(FRC_ERR_NUMERIC, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(FRC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FRC_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (!p) throw std::invalid_argument(std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Non-positive fields (negative for void_threshold) keep the base value.
frc::fiber::ExtractionParams merge_params(frc::fiber::ExtractionParams x, const frc_extraction_params& p) {
  if (p.thickness > 0) x.thickness = p.thickness;
  if (p.step > 0) x.step = p.step;
  if (p.void_threshold >= 0) x.void_threshold = p.void_threshold;
  if (p.max_points > 0) x.max_points = p.max_points;
  if (p.min_seed_deficit > 0) x.min_seed_deficit = p.min_seed_deficit;
  x.validate();
  return x;
}

}  // namespace

extern "C" {

const char* frc_version(void) { return "1.0.0"; }

const char* frc_last_error(void) { return g_last_error.c_str(); }

const char* frc_status_string(frc_status status) {
  switch (status) {
    case FRC_OK: return "ok";
    case FRC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FRC_ERR_CONFIG: return "configuration error";
    case FRC_ERR_IO: return "i/o error";
    case FRC_ERR_NUMERIC: return "numerical failure";
    case FRC_ERR_VERSION: return "version mismatch";
    case FRC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void frc_string_free(char* s) { std::free(s); }

frc_status frc_config_default(const char* problem, frc_config** out) {
  return guarded([&] {
    require(problem, "problem");
    require(out, "out");
    *out = nullptr;
    auto c = std::make_unique<frc_config>();
    c->cfg = frc::app::parse_config(frc::app::json{{"problem", problem}});
    *out = c.release();
  });
}

frc_status frc_config_load(const char* path, frc_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto c = std::make_unique<frc_config>();
    c->cfg = frc::app::load_config(path);
    *out = c.release();
  });
}

frc_status frc_config_parse(const char* json_text, frc_config** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = nullptr;
    const auto doc = frc::app::json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) throw frc::ConfigError("config text is not valid JSON");
    auto c = std::make_unique<frc_config>();
    c->cfg = frc::app::parse_config(doc);
    *out = c.release();
  });
}

frc_status frc_config_override(frc_config* cfg, const char* assignment) {
  return guarded([&] {
    require(cfg, "cfg");
    require(assignment, "assignment");
    cfg->cfg = frc::app::parse_config(frc::app::to_json(cfg->cfg), {assignment});
  });
}

frc_status frc_config_set_seed(frc_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.seed = seed;
  });
}

frc_status frc_config_set_max_epochs(frc_config* cfg, int max_epochs) {
  return guarded([&] {
    require(cfg, "cfg");
    if (max_epochs < 0) throw std::invalid_argument("max_epochs must be >= 0");
    cfg->cfg.schedule.max_epochs = max_epochs;
  });
}

frc_status frc_config_set_output_dir(frc_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg, "cfg");
    require(dir, "dir");
    cfg->cfg.output_dir = dir;
  });
}

frc_status frc_config_output_dir(const frc_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup_string(cfg->cfg.output_dir);
  });
}

frc_status frc_config_extraction(const frc_config* cfg, frc_extraction_params* out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    const auto& x = cfg->cfg.extraction;
    *out = {x.thickness, x.step, x.void_threshold, x.max_points, x.min_seed_deficit};
  });
}

frc_status frc_config_field_resolution(const frc_config* cfg, int* out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = cfg->cfg.field_resolution;
  });
}

frc_status frc_config_to_json(const frc_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup_string(frc::app::to_json(cfg->cfg).dump(2));
  });
}

frc_status frc_config_check_file(const char* path, const char* const* overrides, size_t num_overrides,
                                 char** messages) {
  return guarded([&] {
    require(path, "path");
    require(messages, "messages");
    *messages = nullptr;
    std::vector<std::string> ov;
    for (size_t i = 0; i < num_overrides; ++i) {
      require(overrides[i], "override");
      ov.emplace_back(overrides[i]);
    }
    std::ifstream in(path);
    if (!in) throw frc::IoError(std::string("cannot open config file '") + path + "'");
    const auto doc = frc::app::json::parse(in, nullptr, false);
    std::string text;
    if (doc.is_discarded()) {
      text = "config file is not valid JSON\n";
    } else {
      for (const auto& m : frc::app::check_config(doc, ov)) text += m + "\n";
    }
    *messages = dup_string(text);
  });
}

void frc_config_destroy(frc_config* cfg) { delete cfg; }

frc_status frc_optimize(const frc_config* cfg, frc_epoch_callback callback, void* user_data, frc_run** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = nullptr;
    frc::opt::EpochCallback cb;
    if (callback) {
      cb = [callback, user_data](const frc::opt::EpochRecord& r) {
        const frc_epoch_info info{r.epoch,    r.loss.J, r.loss.J_scaled, r.loss.g_m, r.loss.g_f,
                                  r.loss.L,   r.alpha,  r.p,             r.dw_norm,  r.wall_ms};
        callback(&info, user_data);
      };
    }
    auto run = std::make_unique<frc_run>();
    run->cfg = cfg->cfg;
    run->result = frc::app::optimize(cfg->cfg, cb);
    *out = run.release();
  });
}

frc_status frc_run_summary(const frc_run* run, frc_summary* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    const auto& f = run->result.final.loss;
    *out = {f.J, run->result.J0, f.g_m, f.g_f, f.L, run->result.epochs, run->result.converged ? 1 : 0,
            run->result.wall_seconds};
  });
}

frc_status frc_run_write_artifacts(const frc_run* run, const char* dir, char** summary_json) {
  return guarded([&] {
    require(run, "run");
    if (summary_json) *summary_json = nullptr;
    const std::string target = dir ? dir : run->cfg.output_dir;
    const auto report = frc::app::write_run_artifacts(run->cfg, run->result, target);
    if (summary_json) *summary_json = dup_string(report.summary.dump(2));
  });
}

frc_status frc_run_field(const frc_run* run, frc_field** out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = new frc_field{run->result.field};
  });
}

void frc_run_destroy(frc_run* run) { delete run; }

frc_status frc_field_load(const char* checkpoint_path, frc_field** out) {
  return guarded([&] {
    require(checkpoint_path, "checkpoint_path");
    require(out, "out");
    *out = nullptr;
    auto cp = frc::app::load_checkpoint(checkpoint_path);
    *out = new frc_field{std::move(cp.field)};
  });
}

frc_status frc_field_query(const frc_field* field, double x, double y, frc_sample* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    const auto s = field->field.evaluate(x, y);
    *out = {s.densities.empty() ? s.rho_m : s.densities.front(), s.rho_f, s.theta};
  });
}

void frc_field_destroy(frc_field* field) { delete field; }

frc_status frc_extract(const char* checkpoint_path, const frc_extraction_params* params, int resolution,
                       const char* out_dir, size_t* num_tracks) {
  return guarded([&] {
    require(checkpoint_path, "checkpoint_path");
    require(out_dir, "out_dir");
    const auto cp = frc::app::load_checkpoint(checkpoint_path);
    const auto p = params ? merge_params(cp.config.extraction, *params) : cp.config.extraction;
    const int res = resolution > 0 ? resolution : cp.config.field_resolution;
    const auto report = frc::app::extract(cp, p, res, out_dir);
    if (num_tracks) *num_tracks = report.num_tracks;
  });
}

frc_status frc_sweep(const frc_config* cfg, const double* V_m, size_t num_V_m, const double* r_f,
                     size_t num_r_f, const char* csv_path, size_t* rows, char** warnings) {
  return guarded([&] {
    require(cfg, "cfg");
    require(V_m, "V_m");
    require(r_f, "r_f");
    require(csv_path, "csv_path");
    if (warnings) *warnings = nullptr;
    std::vector<std::string> notes;
    const auto table = frc::app::sweep(cfg->cfg, std::vector<double>(V_m, V_m + num_V_m),
                                       std::vector<double>(r_f, r_f + num_r_f), &notes);
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw frc::IoError(std::string("cannot write '") + csv_path + "'");
    frc::app::write_sweep_csv(out, table);
    if (!out) throw frc::IoError(std::string("write failed for '") + csv_path + "'");
    if (rows) *rows = table.size();
    if (warnings) {
      std::string text;
      for (const auto& n : notes) text += n + "\n";
      *warnings = dup_string(text);
    }
  });
}

frc_status frc_benchmark(const frc_config* cfg, const int* nelx, const int* nely, size_t num_meshes,
                         int iterations, const char* csv_path) {
  return guarded([&] {
    require(cfg, "cfg");
    require(nelx, "nelx");
    require(nely, "nely");
    require(csv_path, "csv_path");
    std::vector<std::pair<int, int>> meshes;
    for (size_t i = 0; i < num_meshes; ++i) meshes.emplace_back(nelx[i], nely[i]);
    const auto rows = frc::app::benchmark(cfg->cfg, meshes, iterations);
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw frc::IoError(std::string("cannot write '") + csv_path + "'");
    frc::app::write_benchmark_csv(out, rows);
    if (!out) throw frc::IoError(std::string("write failed for '") + csv_path + "'");
  });
}

}  // extern "C"
