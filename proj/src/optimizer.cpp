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

#include "frc/optimizer.hpp"

#include "frc/error.hpp"
#include "frc/fe_adjoint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace frc::opt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void ConstraintSpec::validate(bool multi) const {
  if (multi) {
    require(mass > 0.0, "constraints.mass must be positive");
    require(V_f > 0.0 && V_f <= 1.0, "constraints.V_f must lie in (0, 1]");
    return;
  }
  require(V_m > 0.0 && V_m <= 1.0, "constraints.V_m must lie in (0, 1]");
  require(r_f >= 0.0 && r_f <= 1.0, "constraints.r_f must lie in [0, 1]");
}

void Schedule::validate() const {
  require(lr > 0.0, "schedule.lr must be positive");
  require(alpha0 >= 0.0 && alpha_step >= 0.0 && alpha_max >= alpha0,
          "schedule needs 0 <= alpha0 <= alpha_max and alpha_step >= 0");
  require(p0 >= 1.0 && p_step >= 0.0 && p_max >= p0,
          "schedule needs 1 <= p0 <= p_max and p_step >= 0");
  require(max_epochs >= 0, "schedule.max_epochs must be >= 0");
  require(dw_tol >= 0.0, "schedule.dw_tol must be >= 0");
}

void Problem::validate() const {
  bcs.validate(grid.num_dofs());
  if (objective == Objective::OutputDisplacement) {
    require(bcs.output_dof.has_value(), "mechanism objective needs an output dof");
    require(!bcs.is_fixed(*bcs.output_dof), "output dof must not be fixed");
  }
  if (materials) {
    materials->validate();
  } else {
    matrix.validate();
    fiber.validate();
  }
  constraints.validate(multi());
}

void History::append(const EpochRecord& r) {
  if (!records_.empty() && r.epoch <= records_.back().epoch) {
    throw std::logic_error("history epochs must strictly increase");
  }
  records_.push_back(r);
}

void History::write_csv(std::ostream& out) const {
  out << "epoch,J,J_scaled,g_m,g_f,L,alpha,p,dw_norm,wall_ms\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : records_) {
    out << r.epoch << ',' << r.loss.J << ',' << r.loss.J_scaled << ',' << r.loss.g_m << ','
        << r.loss.g_f << ',' << r.loss.L << ',' << r.alpha << ',' << r.p << ',' << r.dw_norm << ','
        << r.wall_ms << '\n';
  }
  out.precision(old_precision);
}

std::pair<double, double> volume_constraints(std::span<const double> rho_m,
                                             std::span<const double> rho_f, double v_e,
                                             const ConstraintSpec& spec) {
  require(rho_m.size() == rho_f.size() && !rho_m.empty(), "volume_constraints: size mismatch");
  double sm = 0.0;
  double sf = 0.0;
  for (double r : rho_m) sm += r * v_e;
  for (double r : rho_f) sf += r * v_e;
  const double total = v_e * static_cast<double>(rho_m.size());
  const double g_m = sm / (spec.V_m * total) - 1.0;
  const double fiber_budget = spec.r_f * spec.V_m * total;
  double g_f;
  if (fiber_budget > 0.0) {
    g_f = sf / fiber_budget - 1.0;
  } else {
    g_f = sf > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return {g_m, g_f};
}

double mass_constraint_multi(const Eigen::MatrixXd& densities, double v_e,
                             const material::MaterialSet& mats, double m_star) {
  require(m_star > 0.0, "mass budget m* must be positive");
  require(densities.cols() == mats.num_densities(), "mass_constraint_multi: wrong density count");
  double mass = 0.0;
  for (int k = 0; k < mats.num_densities(); ++k) {
    mass += mats.mass_density(k) * densities.col(k).sum() * v_e;
  }
  return mass / m_star - 1.0;
}

double fiber_volume_multi(std::span<const double> rho_f, double V_f) {
  require(V_f > 0.0 && !rho_f.empty(), "fiber_volume_multi: V_f must be positive");
  double s = 0.0;
  for (double r : rho_f) s += r;
  return s / (V_f * static_cast<double>(rho_f.size())) - 1.0;
}

LossBreakdown loss(double J, double J0, double g_m, double g_f, double alpha) {
  require(J0 > 0.0, "loss: J0 must be positive");
  LossBreakdown b;
  b.J = J;
  b.J_scaled = J / J0;
  b.g_m = g_m;
  b.g_f = g_f;
  b.L = b.J_scaled + alpha * (g_m * g_m + g_f * g_f);
  return b;
}

double adam_step(Eigen::VectorXd& w, const Eigen::VectorXd& grad, AdamState& s, double lr) {
  if (grad.size() != w.size()) throw std::invalid_argument("adam_step: gradient size mismatch");
  if (s.m.size() != w.size()) {
    s.m = Eigen::VectorXd::Zero(w.size());
    s.v = Eigen::VectorXd::Zero(w.size());
  }
  if (!grad.allFinite()) {
    Eigen::Index bad = 0;
    for (; bad < grad.size() && std::isfinite(grad[bad]); ++bad) {
    }
    throw NumericError("non-finite gradient at weight " + std::to_string(bad));
  }
  ++s.t;
  s.m = s.beta1 * s.m + (1.0 - s.beta1) * grad;
  s.v = s.beta2 * s.v + (1.0 - s.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(s.beta1, s.t);
  const double c2 = 1.0 - std::pow(s.beta2, s.t);
  const Eigen::VectorXd step =
      -lr * (s.m / c1).array() / ((s.v / c2).array().sqrt() + s.eps);
  w += step;
  return step.norm();
}

ContinuationState continuation_at(const Schedule& s, int k) {
  ContinuationState c;
  c.updates = k;
  c.alpha = std::min(s.alpha_max, s.alpha0 + k * s.alpha_step);
  c.p = std::min(s.p_max, s.p0 + k * s.p_step);
  return c;
}

void continuation_update(ContinuationState& state, const Schedule& s) {
  state = continuation_at(s, state.updates + 1);
}

PhaseTimes& PhaseTimes::operator+=(const PhaseTimes& o) {
  forward += o.forward;
  assembly += o.assembly;
  solve += o.solve;
  backward += o.backward;
  step += o.step;
  return *this;
}

LossModel::LossModel(Problem problem, nn::NetworkConfig net, nn::FourierEmbedding embedding)
    : problem_(std::move(problem)), net_(std::move(net)), embedding_(std::move(embedding)) {
  problem_.validate();
  if (problem_.multi()) {
    net_.head = nn::HeadMode::MultiMaterial;
    net_.num_densities = problem_.materials->num_densities();
  } else {
    net_.head = nn::HeadMode::Standard;
    model_ = material::CompositeModel::from(problem_.matrix, problem_.fiber);
    if (problem_.constraints.r_f == 0.0) {
      net_.rho_f_lower = 0.0;
      net_.rho_f_upper = 0.0;
    }
  }
  net_.validate();
  features_ = nn::embed(problem_.grid.element_centers(), embedding_);
  solver_ = std::make_unique<fea::FeSolver>(problem_.grid, problem_.bcs,
                                            fea::compute_templates(problem_.grid));
}

double LossModel::objective_value(const Eigen::VectorXd& u) const {
  if (problem_.objective == Objective::OutputDisplacement) {
    return -fea::output_displacement(u, problem_.bcs);
  }
  return fea::compliance(u, solver_->load());
}

double LossModel::uniform_objective(double rho_m, double rho_f, double theta, double p) {
  const int ne = problem_.grid.num_elements();
  material::Matrix3 D;
  if (problem_.multi()) {
    // Equal share of every matrix material, scaled down to meet the mass
    // budget; void takes the rest.
    const auto& mats = *problem_.materials;
    const int k = mats.num_densities();
    const int n = k - 1;
    double lambda_sum = 0.0;
    for (int i = 0; i < n; ++i) lambda_sum += mats.mass_density(i);
    const double area = ne * problem_.grid.element_area();
    const double s = std::min(1.0 / k, problem_.constraints.mass / (area * lambda_sum));
    std::vector<double> split(k, s);
    split[n] = 1.0 - n * s;
    D = material::effective_tensor_multi(split, rho_f, theta, p, *problem_.materials);
  } else {
    D = material::effective_tensor(rho_m, rho_f, theta, p, model_);
  }
  const auto d = fea::voigt_entries(D);
  Eigen::MatrixXd tensors(ne, fea::kTensorEntries);
  for (int i = 0; i < fea::kTensorEntries; ++i) tensors.col(i).setConstant(d[i]);
  return objective_value(solver_->solve(tensors));
}

double LossModel::initial_objective(double p) {
  const auto& c = problem_.constraints;
  const double J0 = problem_.multi() ? uniform_objective(0.0, c.V_f, 0.0, p)
                                     : uniform_objective(c.V_m, c.r_f, 0.0, p);
  const double scale = std::abs(J0);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw NumericError("initial objective of the uniform design is " + std::to_string(J0) +
                       "; cannot scale the loss");
  }
  return scale;
}

Evaluation LossModel::evaluate(const nn::MlpWeights& weights, double alpha, double p, double J0,
                               const LossTerms& terms, bool gradient, PhaseTimes* times) {
  if (!(J0 > 0.0)) throw std::invalid_argument("evaluate: J0 must be positive");
  const auto t0 = Clock::now();
  solver_->reset_timing();

  ad::Tape tape;
  std::vector<ad::Var> params;
  if (gradient) {
    params = nn::record_parameters(tape, weights);
  } else {
    for (const auto& l : weights.layers) {
      params.push_back(tape.constant(l.weight));
      params.push_back(tape.constant(l.bias));
    }
  }
  const nn::FieldVars field = nn::forward(tape, params, net_, tape.constant(features_));

  ad::Var tensors;
  if (problem_.multi()) {
    tensors = material::effective_tensor_multi_field(field.densities, field.rho_f, field.theta, p,
                                                     *problem_.materials);
  } else {
    tensors = material::effective_tensor_field(field.rho_m, field.rho_f, field.theta, p, model_);
  }
  ad::Var u = ad::fe_solve(*solver_, tensors);

  ad::Var J;
  if (problem_.objective == Objective::OutputDisplacement) {
    J = ad::neg(ad::element(u, *problem_.bcs.output_dof));
  } else {
    J = ad::dot(u, tape.constant(solver_->load()));
  }

  const double ne = problem_.grid.num_elements();
  const auto& c = problem_.constraints;
  ad::Var g_m;
  ad::Var g_f;
  if (problem_.multi()) {
    const auto& mats = *problem_.materials;
    Eigen::MatrixXd lambda(mats.num_densities(), 1);
    for (int k = 0; k < mats.num_densities(); ++k) lambda(k, 0) = mats.mass_density(k);
    const double v_e = problem_.grid.element_area();
    g_m = ad::add_scalar(
        ad::scale(ad::sum(ad::matmul(field.densities, tape.constant(lambda))), v_e / c.mass), -1.0);
    g_f = ad::add_scalar(ad::scale(ad::sum(field.rho_f), 1.0 / (c.V_f * ne)), -1.0);
  } else {
    g_m = ad::add_scalar(ad::scale(ad::sum(field.rho_m), 1.0 / (c.V_m * ne)), -1.0);
    if (c.r_f > 0.0) {
      g_f = ad::add_scalar(ad::scale(ad::sum(field.rho_f), 1.0 / (c.r_f * c.V_m * ne)), -1.0);
    } else {
      g_f = tape.constant(Eigen::MatrixXd::Zero(1, 1));
    }
  }

  std::vector<double> w;
  std::vector<ad::Var> parts;
  if (terms.objective) {
    w.push_back(1.0 / J0);
    parts.push_back(J);
  }
  if (terms.matrix_volume) {
    w.push_back(alpha);
    parts.push_back(ad::square(g_m));
  }
  if (terms.fiber_volume) {
    w.push_back(alpha);
    parts.push_back(ad::square(g_f));
  }
  ad::Var L = parts.empty() ? tape.constant(Eigen::MatrixXd::Zero(1, 1)) : ad::weighted_sum(w, parts);

  const double record_seconds = seconds_since(t0);
  const auto fe_timing = solver_->timing();

  Evaluation ev;
  ev.loss.J = J.scalar();
  ev.loss.J_scaled = ev.loss.J / J0;
  ev.loss.g_m = g_m.scalar();
  ev.loss.g_f = g_f.scalar();
  ev.loss.L = L.scalar();
  ev.rho_m = field.rho_m.value().col(0);
  ev.rho_f = field.rho_f.value().col(0);
  ev.theta = field.theta.value().col(0);
  if (field.densities.valid()) ev.densities = field.densities.value();
  ev.u = u.value().col(0);
  if (!std::isfinite(ev.loss.L)) throw NumericError("non-finite loss");

  double backward_seconds = 0.0;
  if (gradient) {
    const auto tb = Clock::now();
    tape.backward(L);
    ev.gradient.resize(static_cast<Eigen::Index>(weights.size()));
    Eigen::Index at = 0;
    for (const ad::Var& v : params) {
      const Eigen::MatrixXd g = tape.grad(v);
      ev.gradient.segment(at, g.size()) = g.reshaped();
      at += g.size();
    }
    backward_seconds = seconds_since(tb);
  }

  if (times) {
    times->assembly += fe_timing.assembly_seconds;
    times->solve += fe_timing.factor_seconds;
    times->forward += std::max(0.0, record_seconds - fe_timing.assembly_seconds - fe_timing.factor_seconds);
    times->backward += backward_seconds;
  }
  return ev;
}

RunResult run(const Problem& problem, const nn::NetworkConfig& net, const RunOptions& options) {
  std::mt19937_64 rng(options.seed);
  nn::FourierEmbedding embedding = nn::init_embedding(net, problem.grid.h(), rng);
  // Head layout depends on the problem, so weights are drawn for the
  // resolved config.
  nn::NetworkConfig resolved = net;
  if (problem.multi()) {
    resolved.head = nn::HeadMode::MultiMaterial;
    resolved.num_densities = problem.materials->num_densities();
  } else {
    resolved.head = nn::HeadMode::Standard;
  }
  nn::MlpWeights weights = nn::init_weights(resolved, rng);
  return run(problem, resolved, std::move(embedding), std::move(weights), options);
}

RunResult run(const Problem& problem, const nn::NetworkConfig& net, nn::FourierEmbedding embedding,
              nn::MlpWeights weights, const RunOptions& options) {
  const Schedule& s = options.schedule;
  s.validate();
  const auto t_run = Clock::now();
  LossModel model(problem, net, std::move(embedding));

  RunResult res;
  res.J0 = model.initial_objective(s.p0);
  Eigen::VectorXd w = weights.flatten();
  AdamState adam(w.size());
  ContinuationState cs = continuation_at(s, 0);

  for (int epoch = 0; epoch < s.max_epochs; ++epoch) {
    const auto t_epoch = Clock::now();
    weights.assign(w);
    EpochRecord rec;
    try {
      const Evaluation ev = model.evaluate(weights, cs.alpha, cs.p, res.J0, options.terms, true, &res.times);
      const auto t_step = Clock::now();
      rec.dw_norm = adam_step(w, ev.gradient, adam, s.lr);
      res.times.step += seconds_since(t_step);
      rec.loss = ev.loss;
    } catch (const NumericError& e) {
      throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
    }
    rec.epoch = epoch;
    rec.alpha = cs.alpha;
    rec.p = cs.p;
    rec.wall_ms = 1e3 * seconds_since(t_epoch);
    res.history.append(rec);
    if (options.on_epoch) options.on_epoch(rec);
    res.epochs = epoch + 1;
    continuation_update(cs, s);
    if (s.stop_on_convergence && rec.dw_norm < s.dw_tol) {
      res.converged = true;
      break;
    }
  }

  weights.assign(w);
  res.final = model.evaluate(weights, cs.alpha, cs.p, res.J0, options.terms, false);
  res.field = nn::NeuralField(model.network(), model.embedding(), std::move(weights));
  res.wall_seconds = seconds_since(t_run);
  return res;
}

}  // namespace frc::opt
