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

// frc command-line front end. Talks to the library only through frc.h.

#include "frc/frc.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(frc_status s) {
  if (s != FRC_OK) {
    const std::string msg = frc_last_error();
    throw Failure(std::string(frc_status_string(s)) + (msg.empty() ? "" : ": " + msg));
  }
}

struct CString {
  char* p = nullptr;
  ~CString() { frc_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using ConfigPtr = std::unique_ptr<frc_config, decltype(&frc_config_destroy)>;
using RunPtr = std::unique_ptr<frc_run, decltype(&frc_run_destroy)>;

struct Common {
  std::string config;
  std::string problem = "tip_cantilever";
  std::vector<std::string> overrides;
  long long seed = -1;
  int max_epochs = -1;
  std::string out;
  bool quiet = false;
};

void add_config_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--problem", c.problem, "built-in problem when no --config is given");
  cmd->add_option("--override", c.overrides, "key=value, repeatable")->take_all()->allow_extra_args(false);
  cmd->add_option("--seed", c.seed, "random seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-epochs", c.max_epochs, "epoch cap")->check(CLI::NonNegativeNumber);
}

ConfigPtr make_config(const Common& c) {
  frc_config* raw = nullptr;
  if (!c.config.empty()) {
    check(frc_config_load(c.config.c_str(), &raw));
  } else {
    check(frc_config_default(c.problem.c_str(), &raw));
  }
  ConfigPtr cfg(raw, &frc_config_destroy);
  for (const auto& o : c.overrides) check(frc_config_override(cfg.get(), o.c_str()));
  if (c.seed >= 0) check(frc_config_set_seed(cfg.get(), static_cast<uint64_t>(c.seed)));
  if (c.max_epochs >= 0) check(frc_config_set_max_epochs(cfg.get(), c.max_epochs));
  if (!c.out.empty()) check(frc_config_set_output_dir(cfg.get(), c.out.c_str()));
  return cfg;
}

std::string output_dir(const frc_config* cfg) {
  CString s;
  check(frc_config_output_dir(cfg, &s.p));
  return s.str();
}

void progress(const frc_epoch_info* e, void*) {
  if (e->epoch % 10 != 0) return;
  std::fprintf(stderr, "epoch %4d  L %.6g  J/J0 %.6g  g_m %+.4f  g_f %+.4f  alpha %.2f  p %.2f  |dw| %.3g\n",
               e->epoch, e->L, e->J_scaled, e->g_m, e->g_f, e->alpha, e->p, e->dw_norm);
}

int cmd_optimize(const Common& c) {
  ConfigPtr cfg = make_config(c);
  frc_run* raw = nullptr;
  check(frc_optimize(cfg.get(), c.quiet ? nullptr : &progress, nullptr, &raw));
  RunPtr run(raw, &frc_run_destroy);
  CString summary;
  check(frc_run_write_artifacts(run.get(), nullptr, &summary.p));
  frc_summary s{};
  check(frc_run_summary(run.get(), &s));
  if (!c.quiet) std::printf("%s\n", summary.str().c_str());
  return s.converged ? 0 : 2;
}

struct ExtractArgs {
  std::string checkpoint;
  std::string out = "frc_extract";
  double thickness = -1.0;
  double step = -1.0;
  double void_threshold = -1.0;
  int resolution = 0;
};

int cmd_extract(const ExtractArgs& a, bool quiet) {
  const frc_extraction_params p{a.thickness, a.step, a.void_threshold, 0, 0.0};
  size_t tracks = 0;
  check(frc_extract(a.checkpoint.c_str(), &p, a.resolution, a.out.c_str(), &tracks));
  if (!quiet) std::printf("%zu tracks written to %s\n", tracks, a.out.c_str());
  return 0;
}

int cmd_sweep(const Common& c, const std::vector<double>& vm, const std::vector<double>& rf) {
  ConfigPtr cfg = make_config(c);
  const std::string dir = output_dir(cfg.get());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure("cannot create '" + dir + "': " + ec.message());
  const std::string csv = (std::filesystem::path(dir) / "sweep.csv").string();
  size_t rows = 0;
  CString warnings;
  check(frc_sweep(cfg.get(), vm.data(), vm.size(), rf.data(), rf.size(), csv.c_str(), &rows, &warnings.p));
  if (!warnings.str().empty()) std::fprintf(stderr, "%s", warnings.str().c_str());
  if (!c.quiet) std::printf("%zu rows written to %s\n", rows, csv.c_str());
  return 0;
}

std::pair<int, int> parse_mesh(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw Failure("mesh '" + s + "' is not of the form NELXxNELY");
  try {
    size_t a = 0;
    size_t b = 0;
    const int nx = std::stoi(s.substr(0, x), &a);
    const int ny = std::stoi(s.substr(x + 1), &b);
    if (a != x || b != s.size() - x - 1 || nx < 1 || ny < 1) throw std::invalid_argument(s);
    return {nx, ny};
  } catch (const std::logic_error&) {
    throw Failure("mesh '" + s + "' is not of the form NELXxNELY");
  }
}

int cmd_benchmark(const Common& c, const std::vector<std::string>& meshes, int iterations) {
  ConfigPtr cfg = make_config(c);
  std::vector<int> nx;
  std::vector<int> ny;
  for (const auto& m : meshes) {
    const auto [x, y] = parse_mesh(m);
    nx.push_back(x);
    ny.push_back(y);
  }
  const std::string dir = output_dir(cfg.get());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure("cannot create '" + dir + "': " + ec.message());
  const std::string csv = (std::filesystem::path(dir) / "benchmark.csv").string();
  check(frc_benchmark(cfg.get(), nx.data(), ny.data(), nx.size(), iterations, csv.c_str()));
  if (!c.quiet) std::printf("benchmark written to %s\n", csv.c_str());
  return 0;
}

int cmd_validate(const Common& c) {
  if (c.config.empty()) throw Failure("validate-config needs --config");
  std::vector<const char*> ov;
  for (const auto& o : c.overrides) ov.push_back(o.c_str());
  CString messages;
  check(frc_config_check_file(c.config.c_str(), ov.data(), ov.size(), &messages.p));
  if (!messages.str().empty()) {
    std::fprintf(stderr, "%s", messages.str().c_str());
    return 1;
  }
  if (!c.quiet) std::printf("%s: ok\n", c.config.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiber-reinforced composite topology optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(frc_version()));

  Common common;
  app.add_flag("--quiet", common.quiet, "suppress progress output");

  auto* optimize = app.add_subcommand("optimize", "train a design and write all artifacts");
  add_config_flags(optimize, common);
  optimize->add_option("--out", common.out, "output directory");
  optimize->add_flag("--quiet", common.quiet, "suppress progress output");

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "trace fibers from a saved checkpoint");
  extract->add_option("--checkpoint", ex.checkpoint, "checkpoint.json from optimize")->required();
  extract->add_option("--out", ex.out, "output directory");
  extract->add_option("--thickness", ex.thickness, "fiber thickness")->check(CLI::PositiveNumber);
  extract->add_option("--step", ex.step, "tracing step in element units")->check(CLI::PositiveNumber);
  extract->add_option("--void-threshold", ex.void_threshold, "minimum rho_m for seeding")
      ->check(CLI::Range(0.0, 1.0));
  extract->add_option("--resolution", ex.resolution, "samples per element edge for rasters")
      ->check(CLI::PositiveNumber);
  extract->add_flag("--quiet", common.quiet, "suppress output");

  std::vector<double> vm{0.4, 0.5, 0.6};
  std::vector<double> rf{0.5};
  auto* sweep = app.add_subcommand("sweep", "grid study over V_m and r_f");
  add_config_flags(sweep, common);
  sweep->add_option("--out", common.out, "output directory");
  sweep->add_option("--vm", vm, "matrix volume fractions")->delimiter(',');
  sweep->add_option("--rf", rf, "fiber fractions")->delimiter(',');
  sweep->add_flag("--quiet", common.quiet, "suppress output");

  std::vector<std::string> meshes{"20x10", "40x20", "60x30", "80x40"};
  int iterations = 200;
  auto* bench = app.add_subcommand("benchmark", "per-phase timings over mesh sizes");
  add_config_flags(bench, common);
  bench->add_option("--out", common.out, "output directory");
  bench->add_option("--mesh", meshes, "NELXxNELY, repeatable")->delimiter(',');
  bench->add_option("--iterations", iterations, "iterations per mesh")->check(CLI::PositiveNumber);
  bench->add_flag("--quiet", common.quiet, "suppress output");

  auto* validate = app.add_subcommand("validate-config", "check a config file and list every problem");
  add_config_flags(validate, common);
  validate->add_flag("--quiet", common.quiet, "suppress output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize) return cmd_optimize(common);
    if (*extract) return cmd_extract(ex, common.quiet);
    if (*sweep) return cmd_sweep(common, vm, rf);
    if (*bench) return cmd_benchmark(common, meshes, iterations);
    if (*validate) return cmd_validate(common);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "frc: %s\n", e.what());
    return 1;
  }
  return 1;
}
