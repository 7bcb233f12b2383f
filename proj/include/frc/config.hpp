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

// Run configuration: JSON schema, defaults per problem, overrides, and
// construction of the built-in problems.

#include "frc/fiber_extract.hpp"
#include "frc/material.hpp"
#include "frc/neural_field.hpp"
#include "frc/optimizer.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace frc::app {

using nlohmann::json;

struct LoadSpec {
  double magnitude = 1.0;
  // Grounded springs at the mechanism input and output DOFs.
  double spring_in = 0.1;
  double spring_out = 0.1;
};

// Boundary conditions given directly as DOF lists.
struct CustomSpec {
  std::vector<int> fixed_dofs;
  std::vector<std::pair<int, double>> loads;
  std::vector<std::pair<int, double>> springs;
  std::optional<int> input_dof;
  std::optional<int> output_dof;
  opt::Objective objective = opt::Objective::Compliance;
};

struct RunConfig {
  std::string problem = "tip_cantilever";
  std::uint64_t seed = 0;
  std::string output_dir = "frc_out";
  int nelx = 60;
  int nely = 30;
  double h = 1.0;
  LoadSpec loads;
  material::IsotropicMatrix matrix;
  material::OrthotropicFiber fiber;
  // Non-empty only for multi-material problems; first entry carries fiber.
  std::vector<material::MatrixMaterial> materials;
  material::MatrixMaterial void_material{"void", 1e-9, 0.3, 1e-9};
  opt::ConstraintSpec constraints;
  nn::NetworkConfig network;
  opt::Schedule schedule;
  fiber::ExtractionParams extraction;
  // Samples per element edge for the field CSV and rasters.
  int field_resolution = 4;
  CustomSpec custom;

  bool multi() const { return !materials.empty(); }
};

const std::vector<std::string>& problem_names();

// Defaults for a named problem as a JSON document with every key present.
json default_json(const std::string& problem);
RunConfig default_config(const std::string& problem);

// Parses a document, filling defaults for the problem it names. Unknown
// keys, type errors and range errors are collected and reported together
// in one ConfigError.
RunConfig parse_config(const json& doc, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
// Every problem found in `doc`, one message per line; empty when valid.
std::vector<std::string> check_config(const json& doc, const std::vector<std::string>& overrides = {});

json to_json(const RunConfig& cfg);

// Applies "key=value" to a document. key is a dotted path or a leaf name
// that occurs exactly once in the defaults; value is JSON, or a plain
// string when it does not parse.
void apply_override(json& doc, const json& defaults, const std::string& assignment);

opt::Problem build_problem(const RunConfig& cfg);
// Problem geometry on a different mesh (benchmarks).
opt::Problem build_problem(const RunConfig& cfg, int nelx, int nely);

}  // namespace frc::app
