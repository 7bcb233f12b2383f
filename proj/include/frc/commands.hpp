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

#pragma once

// Run orchestration behind the CLI subcommands.

#include "frc/config.hpp"
#include "frc/fiber_extract.hpp"
#include "frc/io.hpp"
#include "frc/optimizer.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace frc::app {

opt::RunResult optimize(const RunConfig& cfg, const opt::EpochCallback& on_epoch = {});

struct ArtifactReport {
  std::vector<std::filesystem::path> files;
  json summary;
  std::size_t num_tracks = 0;
};

// Checkpoint, history, rasters, field CSV, fibers and summary.json.
ArtifactReport write_run_artifacts(const RunConfig& cfg, const opt::RunResult& run,
                                   const std::filesystem::path& dir);

json run_summary(const RunConfig& cfg, const opt::RunResult& run);

ArtifactReport extract(const Checkpoint& cp, const fiber::ExtractionParams& params, int resolution,
                       const std::filesystem::path& dir);

struct SweepRow {
  double V_m = 0.0;
  double r_f = 0.0;
  double J = 0.0;
  double g_m = 0.0;
  double g_f = 0.0;
  int epochs = 0;
  bool converged = false;
  std::string error;
};

// One optimize per (V_m, r_f) cell with the config's seed. Duplicate grid
// values are dropped and reported in `warnings`; failing cells keep their
// error and the sweep continues.
std::vector<SweepRow> sweep(const RunConfig& cfg, std::vector<double> V_m, std::vector<double> r_f,
                            std::vector<std::string>* warnings = nullptr);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct BenchmarkRow {
  int nelx = 0;
  int nely = 0;
  int iterations = 0;
  opt::PhaseTimes phases;
  double wall_seconds = 0.0;
};

// Fixed-length runs of the config's problem on each mesh.
std::vector<BenchmarkRow> benchmark(const RunConfig& cfg, const std::vector<std::pair<int, int>>& meshes,
                                    int iterations);
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

}  // namespace frc::app
