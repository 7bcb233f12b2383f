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

#include "frc/commands.hpp"

#include "frc/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace frc::app {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

template <typename F>
void write_stream(const fs::path& path, F&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  body(out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

fiber::ExtractionResult extract_tracks(const nn::NeuralField& field, const fea::StructuredGrid& grid,
                                       const fiber::ExtractionParams& params) {
  return fiber::extract_fibers(fiber::network_query(field), grid, params);
}

void stage_fields(ArtifactSet& set, const nn::NeuralField& field, const fea::StructuredGrid& grid,
                  int resolution) {
  const FieldRaster raster = sample_field(field, grid, resolution);
  std::vector<double> rho_m;
  std::vector<double> rho_f;
  for (const auto& s : raster.samples) {
    rho_m.push_back(s.rho_m);
    rho_f.push_back(s.rho_f);
  }
  write_png(set.stage("rho_m.png"), rho_m, raster.width, raster.height);
  write_png(set.stage("rho_f.png"), rho_f, raster.width, raster.height);
  write_field_csv(set.stage("field.csv"), raster);
}

std::size_t stage_fibers(ArtifactSet& set, const std::vector<fiber::FiberTrack>& tracks,
                         const fea::StructuredGrid& grid) {
  write_stream(set.stage("fibers.txt"), [&](std::ostream& o) { fiber::write_polyline(o, tracks); });
  write_stream(set.stage("fibers.svg"),
               [&](std::ostream& o) { fiber::write_svg(o, tracks, grid.width(), grid.height()); });
  return tracks.size();
}

double total_length(const std::vector<fiber::FiberTrack>& tracks) {
  double l = 0.0;
  for (const auto& t : tracks) l += t.length();
  return l;
}

json file_list(const std::vector<fs::path>& files) {
  json a = json::array();
  for (const auto& f : files) a.push_back(f.string());
  return a;
}

}  // namespace

opt::RunResult optimize(const RunConfig& cfg, const opt::EpochCallback& on_epoch) {
  opt::RunOptions options;
  options.schedule = cfg.schedule;
  options.seed = cfg.seed;
  options.on_epoch = on_epoch;
  return opt::run(build_problem(cfg), cfg.network, options);
}

json run_summary(const RunConfig& cfg, const opt::RunResult& run) {
  const auto& f = run.final.loss;
  json s = {{"problem", cfg.problem},
            {"seed", cfg.seed},
            {"J", f.J},
            {"J0", run.J0},
            {"J_scaled", f.J_scaled},
            {"g_m", f.g_m},
            {"g_f", f.g_f},
            {"L", f.L},
            {"epochs", run.epochs},
            {"converged", run.converged},
            {"wall_seconds", run.wall_seconds}};
  const opt::Problem p = build_problem(cfg);
  if (p.bcs.output_dof) s["u_out"] = run.final.u[*p.bcs.output_dof];
  if (p.bcs.input_dof) s["u_in"] = run.final.u[*p.bcs.input_dof];
  return s;
}

ArtifactReport write_run_artifacts(const RunConfig& cfg, const opt::RunResult& run, const fs::path& dir) {
  ArtifactSet set(dir);
  const fea::StructuredGrid grid(cfg.nelx, cfg.nely, cfg.h);
  save_checkpoint(set.stage("checkpoint.json"), cfg, run.field);
  write_stream(set.stage("history.csv"), [&](std::ostream& o) { run.history.write_csv(o); });
  stage_fields(set, run.field, grid, cfg.field_resolution);
  const auto fibers = extract_tracks(run.field, grid, cfg.extraction);

  ArtifactReport report;
  report.num_tracks = stage_fibers(set, fibers.tracks, grid);
  report.summary = run_summary(cfg, run);
  report.summary["num_tracks"] = report.num_tracks;
  report.summary["fiber_length"] = total_length(fibers.tracks);
  const fs::path summary_path = set.stage("summary.json");
  report.summary["artifacts"] = file_list(set.files());
  write_text(summary_path, report.summary.dump(2) + "\n");
  set.commit();
  report.files = set.files();
  return report;
}

ArtifactReport extract(const Checkpoint& cp, const fiber::ExtractionParams& params, int resolution,
                       const fs::path& dir) {
  ArtifactSet set(dir);
  const fea::StructuredGrid grid(cp.config.nelx, cp.config.nely, cp.config.h);
  stage_fields(set, cp.field, grid, resolution);
  const auto fibers = extract_tracks(cp.field, grid, params);
  ArtifactReport report;
  report.num_tracks = stage_fibers(set, fibers.tracks, grid);
  report.summary = {{"num_tracks", report.num_tracks},
                    {"fiber_length", total_length(fibers.tracks)},
                    {"thickness", params.thickness},
                    {"step", params.step},
                    {"resolution", resolution}};
  const fs::path summary_path = set.stage("extract_summary.json");
  report.summary["artifacts"] = file_list(set.files());
  write_text(summary_path, report.summary.dump(2) + "\n");
  set.commit();
  report.files = set.files();
  return report;
}

namespace {

std::vector<double> dedupe(std::vector<double> v, const char* name, std::vector<std::string>* warnings) {
  std::vector<double> out;
  for (double x : v) {
    if (std::find(out.begin(), out.end(), x) != out.end()) {
      if (warnings) warnings->push_back(std::string("duplicate ") + name + " value " + std::to_string(x) + " dropped");
      continue;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

std::vector<SweepRow> sweep(const RunConfig& cfg, std::vector<double> V_m, std::vector<double> r_f,
                            std::vector<std::string>* warnings) {
  if (cfg.multi()) throw ConfigError("sweep applies to single-matrix problems only");
  V_m = dedupe(std::move(V_m), "V_m", warnings);
  r_f = dedupe(std::move(r_f), "r_f", warnings);
  if (V_m.empty() || r_f.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<SweepRow> rows;
  for (double vm : V_m) {
    for (double rf : r_f) {
      SweepRow row;
      row.V_m = vm;
      row.r_f = rf;
      try {
        RunConfig cell = cfg;
        cell.constraints.V_m = vm;
        cell.constraints.r_f = rf;
        cell.constraints.validate(false);
        const opt::RunResult r = optimize(cell);
        row.J = r.final.loss.J;
        row.g_m = r.final.loss.g_m;
        row.g_f = r.final.loss.g_f;
        row.epochs = r.epochs;
        row.converged = r.converged;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

// RFC 4180 quoting for free-text cells.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "V_m,r_f,J,g_m,g_f,epochs,converged,error\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,", r.V_m, r.r_f, r.J, r.g_m, r.g_f,
                  r.epochs, r.converged ? 1 : 0);
    out << buf << csv_field(r.error) << '\n';
  }
}

std::vector<BenchmarkRow> benchmark(const RunConfig& cfg, const std::vector<std::pair<int, int>>& meshes,
                                    int iterations) {
  if (iterations < 1) throw std::invalid_argument("benchmark needs at least one iteration");
  std::vector<BenchmarkRow> rows;
  for (const auto& [nelx, nely] : meshes) {
    opt::RunOptions options;
    options.schedule = cfg.schedule;
    options.schedule.max_epochs = iterations;
    options.schedule.stop_on_convergence = false;
    options.seed = cfg.seed;
    const opt::RunResult r = opt::run(build_problem(cfg, nelx, nely), cfg.network, options);
    BenchmarkRow row;
    row.nelx = nelx;
    row.nely = nely;
    row.iterations = r.epochs;
    row.phases = r.times;
    double loop_ms = 0.0;
    for (const auto& rec : r.history.records()) loop_ms += rec.wall_ms;
    row.wall_seconds = 1e-3 * loop_ms;
    rows.push_back(row);
  }
  return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "nelx,nely,elements,iterations,forward_s,assembly_s,solve_s,backward_s,step_s,phase_total_s,wall_s\n";
  char buf[256];
  for (const auto& r : rows) {
    const auto& p = r.phases;
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.nelx, r.nely,
                  r.nelx * r.nely, r.iterations, p.forward, p.assembly, p.solve, p.backward, p.step, p.total(),
                  r.wall_seconds);
    out << buf;
  }
}

}  // namespace frc::app
