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

// Coordinate network producing the design field zeta(x).
//
//   x -> [cos 2 pi x^T F, sin 2 pi x^T F] -> common Swish layers
//     -> density branch  -> density head   -> rho_m (sigmoid), rho_f (bounded sigmoid)
//     -> orientation branch -> angle head  -> theta = -pi/2 + pi sigmoid
//
// In multi-material mode the density head has one softmax group over the
// matrix materials and void, plus a bounded-sigmoid rho_f. With no branch
// layers the heads attach to the last common layer.

#include "frc/autodiff.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace frc::nn {

enum class HeadMode { Standard, MultiMaterial };

struct NetworkConfig {
  int num_frequencies = 150;
  double l_min = 4.0;
  double l_max = 80.0;
  std::vector<int> common_widths{40, 40};
  // Widths of the layers in each branch; both branches use the same list.
  std::vector<int> branch_widths{20, 20};
  HeadMode head = HeadMode::Standard;
  // Softmax group size in multi-material mode (matrix materials + void).
  int num_densities = 3;
  double rho_f_lower = 0.0;
  double rho_f_upper = 1.0;
  // When set, rho_m is this constant instead of a network output.
  std::optional<double> fixed_rho_m;

  void validate() const;
};

struct FourierEmbedding {
  Eigen::MatrixXd frequencies;  // 2 x n_f, 1/mm
};

FourierEmbedding init_embedding(const NetworkConfig& cfg, double h, std::mt19937_64& rng);
// n x 2 points -> n x 2 n_f features.
Eigen::MatrixXd embed(const Eigen::MatrixXd& points, const FourierEmbedding& embedding);

struct DenseLayer {
  std::string name;
  Eigen::MatrixXd weight;  // fan_in x fan_out
  Eigen::RowVectorXd bias;
};

struct MlpWeights {
  std::vector<DenseLayer> layers;

  std::size_t size() const;
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
};

struct LayerShape {
  std::string name;
  int fan_in;
  int fan_out;
};
std::vector<LayerShape> layer_shapes(const NetworkConfig& cfg);

MlpWeights init_weights(const NetworkConfig& cfg, std::mt19937_64& rng);
std::size_t parameter_count(const NetworkConfig& cfg);

struct FieldVars {
  ad::Var rho_m;      // n x 1; fiber-bearing matrix density in multi mode
  ad::Var rho_f;      // n x 1
  ad::Var theta;      // n x 1
  ad::Var densities;  // n x k, multi-material only
};

// params holds (weight, bias) pairs in layer_shapes() order.
FieldVars forward(ad::Tape& tape, std::span<const ad::Var> params, const NetworkConfig& cfg,
                  ad::Var features);

// Records every layer as a tape parameter, in forward() order.
std::vector<ad::Var> record_parameters(ad::Tape& tape, const MlpWeights& weights);

struct FieldSample {
  double rho_m = 0.0;
  double rho_f = 0.0;
  double theta = 0.0;
  std::vector<double> densities;
};

// A trained (or initial) network queried at arbitrary points.
class NeuralField {
 public:
  NeuralField() = default;
  NeuralField(NetworkConfig cfg, FourierEmbedding embedding, MlpWeights weights);

  std::vector<FieldSample> evaluate(const Eigen::MatrixXd& points) const;
  FieldSample evaluate(double x, double y) const;

  const NetworkConfig& config() const { return cfg_; }
  const FourierEmbedding& embedding() const { return embedding_; }
  const MlpWeights& weights() const { return weights_; }
  MlpWeights& weights() { return weights_; }

 private:
  NetworkConfig cfg_;
  FourierEmbedding embedding_;
  MlpWeights weights_;
};

}  // namespace frc::nn
