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
#include "frc/config.hpp"
#include "frc/error.hpp"
#include "frc/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace frc;
using app::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("frc_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

app::RunConfig small_config(const std::string& problem = "tip_cantilever", int epochs = 20) {
  app::RunConfig c = app::default_config(problem);
  c.nelx = 12;
  c.nely = 6;
  c.seed = 5;
  c.schedule.max_epochs = epochs;
  c.field_resolution = 2;
  return c;
}

std::string config_error(const json& doc, const std::vector<std::string>& ov = {}) {
  try {
    app::parse_config(doc, ov);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config round trip for every built-in problem") {
  for (const auto& name : app::problem_names()) {
    CAPTURE(name);
    if (name == "custom") continue;
    const json d = app::default_json(name);
    const app::RunConfig c = app::parse_config(d);
    CHECK(c.problem == name);
    const json once = app::to_json(c);
    CHECK(once == d);
    CHECK(app::to_json(app::parse_config(once)) == once);
    CHECK_NOTHROW(app::build_problem(c).validate());
  }
  // The custom template has no supports until the user adds them.
  json custom = app::default_json("custom");
  CHECK(config_error(custom).find("custom") != std::string::npos);
  custom["custom"]["fixed_dofs"] = {0, 1, 2, 3};
  custom["custom"]["loads"] = {{5, -1.0}};
  custom["mesh"]["nelx"] = 2;
  custom["mesh"]["nely"] = 1;
  const app::RunConfig c = app::parse_config(custom);
  CHECK(app::to_json(c) == custom);
  CHECK_NOTHROW(app::build_problem(c).validate());
}

TEST_CASE("config errors are collected and name their fields") {
  json d = app::default_json("tip_cantilever");
  d["mesh"]["nelx"] = 0;
  const std::string one = config_error(d);
  CHECK(one.find("mesh.nelx") != std::string::npos);

  d["bogus"] = 1;
  d["network"]["l_min"] = "four";
  const std::string many = config_error(d);
  CHECK(many.find("mesh.nelx") != std::string::npos);
  CHECK(many.find("bogus") != std::string::npos);
  CHECK(many.find("network.l_min") != std::string::npos);
  CHECK(app::check_config(d).size() == 3);
  CHECK(app::check_config(app::default_json("michell_half")).empty());

  json partial = {{"problem", "michell_half"}, {"seed", 3}};
  const app::RunConfig c = app::parse_config(partial);
  CHECK(c.seed == 3);
  CHECK(c.nelx == 60);
}

TEST_CASE("overrides change exactly one field") {
  const json base = app::default_json("michell_half");
  const json a = app::to_json(app::parse_config(base));
  const json b = app::to_json(app::parse_config(base, {"V_m=0.4"}));
  const json diff = json::diff(a, b);
  REQUIRE(diff.size() == 1);
  CHECK(diff[0]["path"] == "/constraints/V_m");
  CHECK(b["constraints"]["V_m"] == 0.4);

  const json c = app::to_json(app::parse_config(base, {"schedule.max_epochs=12", "mesh.nelx=20"}));
  CHECK(c["schedule"]["max_epochs"] == 12);
  CHECK(c["mesh"]["nelx"] == 20);

  CHECK(config_error(base, {"nosuchkey=1"}).find("unknown key") != std::string::npos);
  CHECK(config_error(base, {"nu=0.2"}).find("ambiguous") != std::string::npos);
  CHECK(config_error(base, {"=3"}).find("key=value") != std::string::npos);
  json raw = base;
  CHECK_THROWS_AS(app::apply_override(raw, base, "nosuchkey=1"), std::invalid_argument);
  CHECK(app::parse_config(base, {"matrix.nu=0.2"}).matrix.nu == 0.2);
  CHECK(app::parse_config(base, {"output_dir=runs/a"}).output_dir == "runs/a");
}

TEST_CASE("output directory from the environment") {
  TempDir tmp("env");
  const fs::path p = tmp.path / "c.json";
  std::ofstream(p) << app::default_json("tip_cantilever").dump();
  ::setenv("FRC_OUTPUT_DIR", "/tmp/frc_env_out", 1);
  const app::RunConfig c = app::load_config(p.string());
  ::unsetenv("FRC_OUTPUT_DIR");
  CHECK(c.output_dir == "/tmp/frc_env_out");
  CHECK(app::load_config(p.string()).output_dir == "frc_out");
}

TEST_CASE("config files") {
  TempDir tmp("cfg");
  const fs::path p = tmp.path / "c.json";
  std::ofstream(p) << app::default_json("compliant_inverter").dump(2);
  const app::RunConfig c = app::load_config(p.string(), {"seed=9"});
  CHECK(c.problem == "compliant_inverter");
  CHECK(c.seed == 9);
  CHECK_THROWS_AS(app::load_config((tmp.path / "missing.json").string()), IoError);
  std::ofstream(tmp.path / "bad.json") << "{ not json";
  CHECK_THROWS_AS(app::load_config((tmp.path / "bad.json").string()), ConfigError);
}

TEST_CASE("checkpoints") {
  TempDir tmp("ckpt");
  app::RunConfig cfg = small_config("tip_cantilever", 3);
  const opt::RunResult run = app::optimize(cfg);
  const fs::path p = tmp.path / "checkpoint.json";
  app::save_checkpoint(p, cfg, run.field);
  const app::Checkpoint cp = app::load_checkpoint(p);
  CHECK(app::to_json(cp.config) == app::to_json(cfg));
  CHECK(cp.field.weights().flatten() == run.field.weights().flatten());
  CHECK(cp.field.embedding().frequencies == run.field.embedding().frequencies);
  const auto a = run.field.evaluate(3.3, 2.1);
  const auto b = cp.field.evaluate(3.3, 2.1);
  CHECK(a.rho_m == b.rho_m);
  CHECK(a.theta == b.theta);

  SUBCASE("version mismatch") {
    json doc = app::checkpoint_json(cfg, run.field);
    doc["version"] = app::kCheckpointVersion + 1;
    CHECK_THROWS_AS(app::checkpoint_from_json(doc), VersionError);
  }
  SUBCASE("missing and malformed files") {
    CHECK_THROWS_AS(app::load_checkpoint(tmp.path / "none.json"), IoError);
    std::ofstream(tmp.path / "x.json") << "[1, 2]";
    CHECK_THROWS_AS(app::load_checkpoint(tmp.path / "x.json"), IoError);
  }
  SUBCASE("multi-material checkpoint") {
    app::RunConfig mc = small_config("multi_material_cantilever", 2);
    const opt::RunResult mr = app::optimize(mc);
    app::save_checkpoint(tmp.path / "m.json", mc, mr.field);
    const app::Checkpoint m = app::load_checkpoint(tmp.path / "m.json");
    CHECK(m.field.evaluate(1.0, 1.0).densities == mr.field.evaluate(1.0, 1.0).densities);
  }
}

TEST_CASE("rasters") {
  app::RunConfig cfg = small_config("tip_cantilever", 1);
  const opt::RunResult run = app::optimize(cfg);
  const fea::StructuredGrid g(cfg.nelx, cfg.nely, cfg.h);
  const app::FieldRaster r = app::sample_field(run.field, g, 3);
  CHECK(r.width == 36);
  CHECK(r.height == 18);
  CHECK(r.samples.size() == 36u * 18u);
  CHECK(r.points(0, 0) == doctest::Approx(1.0 / 6.0));
  CHECK(r.points(1, 0) == doctest::Approx(0.5));

  TempDir tmp("png");
  std::vector<double> v(r.samples.size(), 0.5);
  app::write_png(tmp.path / "a.png", v, r.width, r.height);
  const std::string bytes = slurp(tmp.path / "a.png");
  REQUIRE(bytes.size() > 8);
  CHECK(bytes.substr(1, 3) == "PNG");
  CHECK_THROWS(app::write_png(tmp.path / "b.png", v, r.width + 1, r.height));
}

TEST_CASE("run artifacts") {
  TempDir tmp("art");
  app::RunConfig cfg = small_config("tip_cantilever", 20);
  const opt::RunResult run = app::optimize(cfg);
  const app::ArtifactReport rep = app::write_run_artifacts(cfg, run, tmp.path / "run");

  const json summary = json::parse(slurp(tmp.path / "run" / "summary.json"));
  CHECK(summary == rep.summary);
  for (const char* name : {"checkpoint.json", "history.csv", "rho_m.png", "rho_f.png", "field.csv",
                           "fibers.txt", "fibers.svg", "summary.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(tmp.path / "run" / name));
  }
  for (const auto& f : summary["artifacts"]) CHECK(fs::exists(f.get<std::string>()));
  for (const auto& e : fs::directory_iterator(tmp.path / "run")) {
    CHECK(e.path().extension() != ".partial");
  }
  CHECK(summary["epochs"] == 20);
  CHECK(summary["J"].get<double>() == run.final.loss.J);
  CHECK(summary["num_tracks"].get<std::size_t>() == rep.num_tracks);

  SUBCASE("reproducible") {
    const opt::RunResult again = app::optimize(cfg);
    app::write_run_artifacts(cfg, again, tmp.path / "run2");
    const json s2 = json::parse(slurp(tmp.path / "run2" / "summary.json"));
    for (const char* k : {"J", "J0", "g_m", "g_f", "L"}) {
      CHECK(std::abs(s2[k].get<double>() - summary[k].get<double>()) <= 1e-10);
    }
    CHECK(slurp(tmp.path / "run2" / "fibers.txt") == slurp(tmp.path / "run" / "fibers.txt"));
  }
  SUBCASE("extraction does not depend on raster resolution") {
    const app::Checkpoint cp = app::load_checkpoint(tmp.path / "run" / "checkpoint.json");
    const auto a = app::extract(cp, cfg.extraction, 2, tmp.path / "ex2");
    const auto b = app::extract(cp, cfg.extraction, 7, tmp.path / "ex7");
    CHECK(a.num_tracks == rep.num_tracks);
    CHECK(slurp(tmp.path / "ex2" / "fibers.txt") == slurp(tmp.path / "ex7" / "fibers.txt"));
    CHECK(slurp(tmp.path / "ex2" / "fibers.txt") == slurp(tmp.path / "run" / "fibers.txt"));
    CHECK(b.summary["resolution"] == 7);
  }
  SUBCASE("very thick fibers") {
    const app::Checkpoint cp = app::load_checkpoint(tmp.path / "run" / "checkpoint.json");
    fiber::ExtractionParams p = cfg.extraction;
    p.thickness = 5.0;
    const auto r = app::extract(cp, p, 2, tmp.path / "thick");
    CHECK(r.num_tracks <= static_cast<std::size_t>(cfg.nelx * cfg.nely));
  }
}

TEST_CASE("artifact staging") {
  TempDir tmp("stage");
  {
    app::ArtifactSet s(tmp.path / "a");
    std::ofstream(s.stage("x.txt")) << "x";
    CHECK(fs::exists(tmp.path / "a" / "x.txt.partial"));
    CHECK_FALSE(fs::exists(tmp.path / "a" / "x.txt"));
    s.commit();
  }
  CHECK(fs::exists(tmp.path / "a" / "x.txt"));
  CHECK_FALSE(fs::exists(tmp.path / "a" / "x.txt.partial"));
}

TEST_CASE("sweeps") {
  app::RunConfig cfg = small_config("tip_cantilever", 15);
  std::vector<std::string> warnings;
  const auto rows = app::sweep(cfg, {0.4, 0.5, 0.4}, {0.5, 0.5}, &warnings);
  CHECK(rows.size() == 2);
  CHECK(warnings.size() == 2);
  for (const auto& r : rows) CHECK(r.error.empty());

  SUBCASE("a single cell matches optimize") {
    const auto one = app::sweep(cfg, {cfg.constraints.V_m}, {cfg.constraints.r_f});
    REQUIRE(one.size() == 1);
    const opt::RunResult run = app::optimize(cfg);
    CHECK(one[0].J == run.final.loss.J);
    CHECK(one[0].g_m == run.final.loss.g_m);
    CHECK(one[0].epochs == run.epochs);
  }
  SUBCASE("failing cells are recorded") {
    const auto bad = app::sweep(cfg, {-0.5, 0.5}, {0.5});
    REQUIRE(bad.size() == 2);
    CHECK_FALSE(bad[0].error.empty());
    CHECK(bad[1].error.empty());
    std::ostringstream csv;
    app::write_sweep_csv(csv, bad);
    const std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  }
}

TEST_CASE("benchmarks") {
  app::RunConfig cfg = small_config("tip_cantilever");
  const auto rows = app::benchmark(cfg, {{1, 1}, {10, 5}}, 10);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].wall_seconds < 1.0);
  for (const auto& r : rows) {
    CHECK(r.iterations == 10);
    CHECK(r.phases.total() <= r.wall_seconds * 1.1);
    CHECK(r.phases.total() >= r.wall_seconds * 0.9);
  }
  std::ostringstream csv;
  app::write_benchmark_csv(csv, rows);
  CHECK(csv.str().rfind("nelx", 0) == 0);
}
