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

// Training loop: network field -> effective tensors -> FE solve -> loss,
// then Adam on the flattened weights with penalty and SIMP continuation.

#include "frc/autodiff.hpp"
#include "frc/material.hpp"
#include "frc/mesh_fea.hpp"
#include "frc/neural_field.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace frc::opt {

enum class Objective { Compliance, OutputDisplacement };

struct ConstraintSpec {
  // Single-matrix mode.
  double V_m = 0.5;
  double r_f = 0.5;
  // Multi-material mode.
  double mass = 600.0;
  double V_f = 0.25;

  void validate(bool multi) const;
};

struct Schedule {
  double lr = 0.01;
  double alpha0 = 0.05;
  double alpha_step = 0.05;
  double alpha_max = 100.0;
  double p0 = 1.0;
  double p_step = 0.02;
  double p_max = 8.0;
  int max_epochs = 500;
  double dw_tol = 0.005;
  // When false the loop always runs max_epochs (timing runs).
  bool stop_on_convergence = true;

  void validate() const;
};

struct Problem {
  fea::StructuredGrid grid{60, 30, 1.0};
  fea::BoundaryConditions bcs;
  Objective objective = Objective::Compliance;
  material::IsotropicMatrix matrix;
  material::OrthotropicFiber fiber;
  // Set for multi-material problems; matrix above is then unused.
  std::optional<material::MaterialSet> materials;
  ConstraintSpec constraints;

  bool multi() const { return materials.has_value(); }
  void validate() const;
};

struct LossBreakdown {
  double J = 0.0;
  double J_scaled = 0.0;
  double g_m = 0.0;
  double g_f = 0.0;
  double L = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  LossBreakdown loss;
  double alpha = 0.0;
  double p = 0.0;
  double dw_norm = 0.0;
  double wall_ms = 0.0;
};

class History {
 public:
  // Throws std::logic_error unless epochs strictly increase.
  void append(const EpochRecord& r);
  const std::vector<EpochRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const EpochRecord& back() const { return records_.back(); }
  void write_csv(std::ostream& out) const;

 private:
  std::vector<EpochRecord> records_;
};

// (g_m, g_f) for one sample per element of area v_e. A zero fiber budget
// with fiber present reports g_f = +inf.
std::pair<double, double> volume_constraints(std::span<const double> rho_m,
                                             std::span<const double> rho_f, double v_e,
                                             const ConstraintSpec& spec);
// densities: n_e x k (void last).
double mass_constraint_multi(const Eigen::MatrixXd& densities, double v_e,
                             const material::MaterialSet& mats, double m_star);
double fiber_volume_multi(std::span<const double> rho_f, double V_f);

// L = J/J0 + alpha (g_m^2 + g_f^2).
LossBreakdown loss(double J, double J0, double g_m, double g_f, double alpha);

struct AdamState {
  explicit AdamState(Eigen::Index n = 0)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  int t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Applies one bias-corrected Adam step in place and returns ||dw||.
// Throws NumericError on non-finite gradients.
double adam_step(Eigen::VectorXd& w, const Eigen::VectorXd& grad, AdamState& state, double lr);

struct ContinuationState {
  int updates = 0;
  double alpha = 0.0;
  double p = 0.0;
};
// min(cap, start + k * step) for alpha and p.
ContinuationState continuation_at(const Schedule& s, int k);
void continuation_update(ContinuationState& state, const Schedule& s);

// Selects which loss terms contribute to L (and its gradient).
struct LossTerms {
  bool objective = true;
  bool matrix_volume = true;
  bool fiber_volume = true;
};

struct PhaseTimes {
  double forward = 0.0;
  double assembly = 0.0;
  double solve = 0.0;
  double backward = 0.0;
  double step = 0.0;

  double total() const { return forward + assembly + solve + backward + step; }
  PhaseTimes& operator+=(const PhaseTimes& o);
};

struct Evaluation {
  LossBreakdown loss;
  // dL/dw in MlpWeights::flatten() order; empty unless requested.
  Eigen::VectorXd gradient;
  Eigen::VectorXd rho_m;
  Eigen::VectorXd rho_f;
  Eigen::VectorXd theta;
  Eigen::MatrixXd densities;
  Eigen::VectorXd u;
};

// Owns the solver and the element-center features for one problem.
class LossModel {
 public:
  LossModel(Problem problem, nn::NetworkConfig net, nn::FourierEmbedding embedding);

  Evaluation evaluate(const nn::MlpWeights& weights, double alpha, double p, double J0,
                      const LossTerms& terms = {}, bool gradient = true,
                      PhaseTimes* times = nullptr);

  // Objective of the uniform design used for scaling; |J| for mechanisms.
  double initial_objective(double p);
  // Raw objective of a uniform design (signed).
  double uniform_objective(double rho_m, double rho_f, double theta, double p);

  const Problem& problem() const { return problem_; }
  const nn::NetworkConfig& network() const { return net_; }
  const nn::FourierEmbedding& embedding() const { return embedding_; }
  fea::FeSolver& solver() { return *solver_; }

 private:
  double objective_value(const Eigen::VectorXd& u) const;

  Problem problem_;
  nn::NetworkConfig net_;
  nn::FourierEmbedding embedding_;
  material::CompositeModel model_;
  Eigen::MatrixXd features_;
  std::unique_ptr<fea::FeSolver> solver_;
};

struct RunResult {
  nn::NeuralField field;
  History history;
  // Evaluated with the final weights after the last update.
  Evaluation final;
  double J0 = 0.0;
  bool converged = false;
  int epochs = 0;
  PhaseTimes times;
  double wall_seconds = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

struct RunOptions {
  Schedule schedule;
  std::uint64_t seed = 0;
  LossTerms terms;
  EpochCallback on_epoch;
};

RunResult run(const Problem& problem, const nn::NetworkConfig& net, const RunOptions& options);
// Starts from a given embedding and weights instead of seeding them.
RunResult run(const Problem& problem, const nn::NetworkConfig& net, nn::FourierEmbedding embedding,
              nn::MlpWeights weights, const RunOptions& options);

}  // namespace frc::opt
