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

// Checkpoints, rasters and tabular exports.

#include "frc/config.hpp"
#include "frc/fiber_extract.hpp"
#include "frc/neural_field.hpp"
#include "frc/optimizer.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace frc::app {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  RunConfig config;
  nn::NeuralField field;
};

json checkpoint_json(const RunConfig& config, const nn::NeuralField& field);
Checkpoint checkpoint_from_json(const json& doc);
void save_checkpoint(const std::filesystem::path& path, const RunConfig& config,
                     const nn::NeuralField& field);
// Throws IoError when missing, VersionError on a format mismatch.
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Samples on a (res * nelx) x (res * nely) grid of sub-cell centers.
struct FieldRaster {
  int width = 0;
  int height = 0;
  // Row-major from the bottom row up; x fastest.
  Eigen::MatrixXd points;
  std::vector<nn::FieldSample> samples;
};
FieldRaster sample_field(const nn::NeuralField& field, const fea::StructuredGrid& grid, int res);

// 8-bit grayscale, value 1 black and 0 white, origin bottom-left.
void write_png(const std::filesystem::path& path, const std::vector<double>& values, int width,
               int height);
void write_field_csv(const std::filesystem::path& path, const FieldRaster& raster);

// Collects files under their final names and writes each to
// "<name>.partial" first; commit() renames all of them at once.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir);

  // Path to write for artifact `name` (a file name inside the directory).
  std::filesystem::path stage(const std::string& name);
  void commit();
  const std::vector<std::filesystem::path>& files() const { return final_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> staged_;
  std::vector<std::filesystem::path> final_;
};

}  // namespace frc::app
