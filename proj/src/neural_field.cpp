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

#include "frc/neural_field.hpp"

#include "frc/error.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frc::nn {

void NetworkConfig::validate() const {
  if (num_frequencies < 1) throw std::invalid_argument("network.num_frequencies must be >= 1");
  if (!(l_min > 0.0)) throw std::invalid_argument("network.l_min must be positive");
  if (l_min > l_max) throw std::invalid_argument("network.l_min must not exceed network.l_max");
  if (common_widths.empty()) throw std::invalid_argument("network needs at least one common layer");
  for (int w : common_widths) {
    if (w < 1) throw std::invalid_argument("network layer widths must be >= 1");
  }
  for (int w : branch_widths) {
    if (w < 1) throw std::invalid_argument("network layer widths must be >= 1");
  }
  if (!(rho_f_lower >= 0.0 && rho_f_lower <= rho_f_upper && rho_f_upper <= 1.0)) {
    throw std::invalid_argument("fiber density bounds need 0 <= lower <= upper <= 1");
  }
  if (head == HeadMode::MultiMaterial && num_densities < 2) {
    throw std::invalid_argument("multi-material head needs at least one material plus void");
  }
  if (fixed_rho_m && !(*fixed_rho_m >= 0.0 && *fixed_rho_m <= 1.0)) {
    throw std::invalid_argument("fixed_rho_m must lie in [0, 1]");
  }
}

FourierEmbedding init_embedding(const NetworkConfig& cfg, double h, std::mt19937_64& rng) {
  cfg.validate();
  const double lo = h / cfg.l_max;
  const double hi = h / cfg.l_min;
  std::uniform_real_distribution<double> magnitude(lo, hi);
  std::bernoulli_distribution flip(0.5);
  FourierEmbedding out;
  out.frequencies.resize(2, cfg.num_frequencies);
  for (int j = 0; j < cfg.num_frequencies; ++j) {
    for (int r = 0; r < 2; ++r) {
      const double mag = lo == hi ? lo : magnitude(rng);
      out.frequencies(r, j) = flip(rng) ? -mag : mag;
    }
  }
  return out;
}

Eigen::MatrixXd embed(const Eigen::MatrixXd& points, const FourierEmbedding& embedding) {
  if (points.cols() != 2) throw std::invalid_argument("embed: points must be n x 2");
  const Eigen::Index nf = embedding.frequencies.cols();
  const Eigen::ArrayXXd phase = 2.0 * std::numbers::pi * (points * embedding.frequencies).array();
  Eigen::MatrixXd out(points.rows(), 2 * nf);
  out.leftCols(nf) = phase.cos().matrix();
  out.rightCols(nf) = phase.sin().matrix();
  return out;
}

std::size_t MlpWeights::size() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

Eigen::VectorXd MlpWeights::flatten() const {
  Eigen::VectorXd flat(size());
  Eigen::Index at = 0;
  for (const auto& l : layers) {
    flat.segment(at, l.weight.size()) = l.weight.reshaped();
    at += l.weight.size();
    flat.segment(at, l.bias.size()) = l.bias.transpose();
    at += l.bias.size();
  }
  return flat;
}

void MlpWeights::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != size()) {
    throw std::invalid_argument("flat weight vector has " + std::to_string(flat.size()) +
                                " entries, network has " + std::to_string(size()));
  }
  Eigen::Index at = 0;
  for (auto& l : layers) {
    l.weight.reshaped() = flat.segment(at, l.weight.size());
    at += l.weight.size();
    l.bias = flat.segment(at, l.bias.size()).transpose();
    at += l.bias.size();
  }
}

namespace {

int density_outputs(const NetworkConfig& cfg) {
  return cfg.head == HeadMode::MultiMaterial ? cfg.num_densities + 1 : 2;
}

bool forked(const NetworkConfig& cfg) { return !cfg.branch_widths.empty(); }

}  // namespace

std::vector<LayerShape> layer_shapes(const NetworkConfig& cfg) {
  std::vector<LayerShape> shapes;
  int width = 2 * cfg.num_frequencies;
  for (std::size_t i = 0; i < cfg.common_widths.size(); ++i) {
    shapes.push_back({"common" + std::to_string(i), width, cfg.common_widths[i]});
    width = cfg.common_widths[i];
  }
  if (!forked(cfg)) {
    shapes.push_back({"head", width, density_outputs(cfg) + 1});
    return shapes;
  }
  for (const char* branch : {"density", "orientation"}) {
    int w = width;
    for (std::size_t i = 0; i < cfg.branch_widths.size(); ++i) {
      shapes.push_back({std::string(branch) + "_branch" + std::to_string(i), w, cfg.branch_widths[i]});
      w = cfg.branch_widths[i];
    }
  }
  const int branch_out = cfg.branch_widths.back();
  shapes.push_back({"density_head", branch_out, density_outputs(cfg)});
  shapes.push_back({"orientation_head", branch_out, 1});
  return shapes;
}

MlpWeights init_weights(const NetworkConfig& cfg, std::mt19937_64& rng) {
  MlpWeights w;
  for (const auto& s : layer_shapes(cfg)) {
    std::normal_distribution<double> xavier(0.0, std::sqrt(2.0 / (s.fan_in + s.fan_out)));
    DenseLayer layer;
    layer.name = s.name;
    layer.weight.resize(s.fan_in, s.fan_out);
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) layer.weight(i, j) = xavier(rng);
    }
    layer.bias = Eigen::RowVectorXd::Zero(s.fan_out);
    w.layers.push_back(std::move(layer));
  }
  return w;
}

std::size_t parameter_count(const NetworkConfig& cfg) {
  std::size_t n = 0;
  for (const auto& s : layer_shapes(cfg)) n += static_cast<std::size_t>(s.fan_in + 1) * s.fan_out;
  return n;
}

std::vector<ad::Var> record_parameters(ad::Tape& tape, const MlpWeights& weights) {
  std::vector<ad::Var> params;
  params.reserve(2 * weights.layers.size());
  for (const auto& l : weights.layers) {
    params.push_back(tape.parameter(l.weight));
    params.push_back(tape.parameter(l.bias));
  }
  return params;
}

namespace {

ad::Var dense(ad::Var x, std::span<const ad::Var> params, std::size_t layer) {
  return ad::add_row(ad::matmul(x, params[2 * layer]), params[2 * layer + 1]);
}

void check_finite(ad::Var v, const std::string& layer) {
  if (!v.value().allFinite()) throw NumericError("non-finite activations in layer '" + layer + "'");
}

ad::Var bounded_sigmoid(ad::Var logits, double lower, double upper) {
  return ad::add_scalar(ad::scale(ad::sigmoid(logits), upper - lower), lower);
}

}  // namespace

FieldVars forward(ad::Tape& tape, std::span<const ad::Var> params, const NetworkConfig& cfg,
                  ad::Var features) {
  const auto shapes = layer_shapes(cfg);
  if (params.size() != 2 * shapes.size()) {
    throw std::invalid_argument("forward: expected " + std::to_string(2 * shapes.size()) +
                                " parameter tensors, got " + std::to_string(params.size()));
  }
  std::size_t layer = 0;
  ad::Var h = features;
  for (std::size_t i = 0; i < cfg.common_widths.size(); ++i, ++layer) {
    h = ad::swish(dense(h, params, layer));
    check_finite(h, shapes[layer].name);
  }
  ad::Var density_logits;
  ad::Var angle_logit;
  const int nd = density_outputs(cfg);
  if (!forked(cfg)) {
    ad::Var out = dense(h, params, layer);
    check_finite(out, shapes[layer].name);
    density_logits = ad::slice_cols(out, 0, nd);
    angle_logit = ad::col(out, nd);
  } else {
    ad::Var d = h;
    for (std::size_t i = 0; i < cfg.branch_widths.size(); ++i, ++layer) {
      d = ad::swish(dense(d, params, layer));
      check_finite(d, shapes[layer].name);
    }
    ad::Var o = h;
    for (std::size_t i = 0; i < cfg.branch_widths.size(); ++i, ++layer) {
      o = ad::swish(dense(o, params, layer));
      check_finite(o, shapes[layer].name);
    }
    density_logits = dense(d, params, layer);
    check_finite(density_logits, shapes[layer].name);
    ++layer;
    angle_logit = dense(o, params, layer);
    check_finite(angle_logit, shapes[layer].name);
  }

  FieldVars out;
  const Eigen::Index n = features.rows();
  if (cfg.head == HeadMode::MultiMaterial) {
    out.densities = ad::softmax_rows(ad::slice_cols(density_logits, 0, cfg.num_densities));
    out.rho_m = ad::col(out.densities, 0);
    out.rho_f = bounded_sigmoid(ad::col(density_logits, cfg.num_densities), cfg.rho_f_lower,
                                cfg.rho_f_upper);
  } else {
    out.rho_m = cfg.fixed_rho_m ? tape.constant(Eigen::MatrixXd::Constant(n, 1, *cfg.fixed_rho_m))
                                : ad::sigmoid(ad::col(density_logits, 0));
    out.rho_f = bounded_sigmoid(ad::col(density_logits, 1), cfg.rho_f_lower, cfg.rho_f_upper);
  }
  out.theta = ad::add_scalar(ad::scale(ad::sigmoid(angle_logit), std::numbers::pi),
                             -0.5 * std::numbers::pi);
  return out;
}

NeuralField::NeuralField(NetworkConfig cfg, FourierEmbedding embedding, MlpWeights weights)
    : cfg_(std::move(cfg)), embedding_(std::move(embedding)), weights_(std::move(weights)) {
  if (embedding_.frequencies.cols() != cfg_.num_frequencies) {
    throw std::invalid_argument("embedding size does not match network config");
  }
  const auto shapes = layer_shapes(cfg_);
  if (shapes.size() != weights_.layers.size()) {
    throw std::invalid_argument("weights do not match network config");
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto& l = weights_.layers[i];
    if (l.weight.rows() != shapes[i].fan_in || l.weight.cols() != shapes[i].fan_out ||
        l.bias.size() != shapes[i].fan_out) {
      throw std::invalid_argument("layer '" + shapes[i].name + "' has the wrong shape");
    }
  }
}

namespace {

Eigen::MatrixXd dense_plain(const Eigen::MatrixXd& x, const DenseLayer& l) {
  Eigen::MatrixXd z = x * l.weight;
  z.rowwise() += l.bias;
  return z;
}

Eigen::MatrixXd swish_plain(const Eigen::MatrixXd& z, const std::string& layer) {
  Eigen::MatrixXd a = (z.array() / (1.0 + (-z.array()).exp())).matrix();
  if (!a.allFinite()) throw NumericError("non-finite activations in layer '" + layer + "'");
  return a;
}

Eigen::ArrayXd sigmoid_plain(const Eigen::ArrayXd& z) { return 1.0 / (1.0 + (-z).exp()); }

}  // namespace

// Same arithmetic as forward() without a tape.
std::vector<FieldSample> NeuralField::evaluate(const Eigen::MatrixXd& points) const {
  const auto& layers = weights_.layers;
  std::size_t layer = 0;
  Eigen::MatrixXd h = embed(points, embedding_);
  for (std::size_t i = 0; i < cfg_.common_widths.size(); ++i, ++layer) {
    h = swish_plain(dense_plain(h, layers[layer]), layers[layer].name);
  }
  Eigen::MatrixXd density_logits;
  Eigen::VectorXd angle_logit;
  const int nd = density_outputs(cfg_);
  if (!forked(cfg_)) {
    const Eigen::MatrixXd out = dense_plain(h, layers[layer]);
    density_logits = out.leftCols(nd);
    angle_logit = out.col(nd);
  } else {
    Eigen::MatrixXd d = h;
    for (std::size_t i = 0; i < cfg_.branch_widths.size(); ++i, ++layer) {
      d = swish_plain(dense_plain(d, layers[layer]), layers[layer].name);
    }
    Eigen::MatrixXd o = h;
    for (std::size_t i = 0; i < cfg_.branch_widths.size(); ++i, ++layer) {
      o = swish_plain(dense_plain(o, layers[layer]), layers[layer].name);
    }
    density_logits = dense_plain(d, layers[layer]);
    ++layer;
    angle_logit = dense_plain(o, layers[layer]).col(0);
  }
  if (!density_logits.allFinite() || !angle_logit.allFinite()) {
    throw NumericError("non-finite activations in output head");
  }

  const Eigen::Index n = points.rows();
  std::vector<FieldSample> out(n);
  const double span = cfg_.rho_f_upper - cfg_.rho_f_lower;
  const Eigen::ArrayXd theta = -0.5 * std::numbers::pi + std::numbers::pi * sigmoid_plain(angle_logit.array());
  if (cfg_.head == HeadMode::MultiMaterial) {
    const int k = cfg_.num_densities;
    const Eigen::ArrayXd rho_f = cfg_.rho_f_lower + span * sigmoid_plain(density_logits.col(k).array());
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::RowVectorXd z = density_logits.row(i).head(k);
      const Eigen::RowVectorXd e = (z.array() - z.maxCoeff()).exp().matrix();
      const Eigen::RowVectorXd s = e / e.sum();
      out[i].densities.assign(s.data(), s.data() + k);
      out[i].rho_m = s[0];
      out[i].rho_f = rho_f[i];
      out[i].theta = theta[i];
    }
    return out;
  }
  const Eigen::ArrayXd rho_m = sigmoid_plain(density_logits.col(0).array());
  const Eigen::ArrayXd rho_f = cfg_.rho_f_lower + span * sigmoid_plain(density_logits.col(1).array());
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i].rho_m = cfg_.fixed_rho_m ? *cfg_.fixed_rho_m : rho_m[i];
    out[i].rho_f = rho_f[i];
    out[i].theta = theta[i];
  }
  return out;
}

FieldSample NeuralField::evaluate(double x, double y) const {
  Eigen::MatrixXd p(1, 2);
  p << x, y;
  return evaluate(p).front();
}

}  // namespace frc::nn
