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

#include "frc/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace frc::ad {

const Matrix& Var::value() const { return tape_->value(*this); }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw std::invalid_argument("scalar() on a " + std::to_string(v.rows()) + "x" +
                                std::to_string(v.cols()) + " node");
  }
  return v(0, 0);
}

Var Tape::push(Matrix value, bool requires_grad, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) { return push(std::move(value), false, {}); }

Var Tape::parameter(Matrix value) { return push(std::move(value), true, {}); }

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(backward));
}

Var Tape::record(Matrix value, std::span<const Var> inputs, BackwardFn backward) {
  bool needs = false;
  for (const Var& in : inputs) {
    if (&in.tape() != this) throw std::invalid_argument("operand recorded on another tape");
    needs = needs || nodes_[in.id()].requires_grad;
  }
  return push(std::move(value), needs, std::move(backward));
}

void Tape::accumulate(Var v, const Matrix& contribution) {
  Node& node = nodes_[v.id()];
  if (!node.requires_grad) return;
  if (contribution.rows() != node.value.rows() || contribution.cols() != node.value.cols()) {
    throw std::logic_error("gradient shape mismatch at node " + std::to_string(v.id()));
  }
  if (node.has_grad) {
    node.grad += contribution;
  } else {
    node.grad = contribution;
    node.has_grad = true;
  }
}

void Tape::backward(Var loss) {
  const Matrix& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw std::invalid_argument("backward() needs a scalar loss, got " +
                                std::to_string(lv.rows()) + "x" + std::to_string(lv.cols()));
  }
  for (Node& n : nodes_) {
    n.has_grad = false;
    n.grad.resize(0, 0);
  }
  last_visits_ = 0;
  if (!nodes_[loss.id()].requires_grad) return;
  accumulate(loss, Matrix::Ones(1, 1));
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.has_grad || !n.backward) continue;
    ++last_visits_;
    // The closure may accumulate into earlier nodes only, so n.grad is final.
    n.backward(*this, n.grad);
  }
}

Matrix Tape::grad(Var v) const {
  const Node& n = nodes_.at(v.id());
  if (n.has_grad) return n.grad;
  return Matrix::Zero(n.value.rows(), n.value.cols());
}

namespace {

bool is_scalar(const Matrix& m) { return m.rows() == 1 && m.cols() == 1; }

void check_broadcast(const Matrix& a, const Matrix& b, const char* op) {
  if ((a.rows() == b.rows() && a.cols() == b.cols()) || is_scalar(a) || is_scalar(b)) return;
  throw std::invalid_argument(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                              "x" + std::to_string(a.cols()) + " vs " +
                              std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

// Reduces a broadcast gradient back onto an operand of shape `like`.
Matrix unbroadcast(const Matrix& g, const Matrix& like) {
  if (is_scalar(like) && !is_scalar(g)) return Matrix::Constant(1, 1, g.sum());
  return g;
}

Matrix broadcast_to(const Matrix& m, Eigen::Index rows, Eigen::Index cols) {
  if (m.rows() == rows && m.cols() == cols) return m;
  return Matrix::Constant(rows, cols, m(0, 0));
}

template <typename F>
Var unary(Var a, Matrix value, F derivative_times_grad) {
  return a.tape().record(std::move(value), {a},
                         [a, derivative_times_grad](Tape& t, const Matrix& g) {
                           t.accumulate(a, derivative_times_grad(t.value(a), g));
                         });
}

}  // namespace

Var add(Var a, Var b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  check_broadcast(av, bv, "add");
  const Eigen::Index r = std::max(av.rows(), bv.rows());
  const Eigen::Index c = std::max(av.cols(), bv.cols());
  Matrix out = broadcast_to(av, r, c) + broadcast_to(bv, r, c);
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, unbroadcast(g, t.value(a)));
    t.accumulate(b, unbroadcast(g, t.value(b)));
  });
}

Var sub(Var a, Var b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  check_broadcast(av, bv, "sub");
  const Eigen::Index r = std::max(av.rows(), bv.rows());
  const Eigen::Index c = std::max(av.cols(), bv.cols());
  Matrix out = broadcast_to(av, r, c) - broadcast_to(bv, r, c);
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, unbroadcast(g, t.value(a)));
    t.accumulate(b, unbroadcast(-g, t.value(b)));
  });
}

Var mul(Var a, Var b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  check_broadcast(av, bv, "mul");
  const Eigen::Index r = std::max(av.rows(), bv.rows());
  const Eigen::Index c = std::max(av.cols(), bv.cols());
  Matrix out = broadcast_to(av, r, c).cwiseProduct(broadcast_to(bv, r, c));
  return a.tape().record(std::move(out), {a, b}, [a, b, r, c](Tape& t, const Matrix& g) {
    const Matrix& av = t.value(a);
    const Matrix& bv = t.value(b);
    if (t.requires_grad(a)) t.accumulate(a, unbroadcast(g.cwiseProduct(broadcast_to(bv, r, c)), av));
    if (t.requires_grad(b)) t.accumulate(b, unbroadcast(g.cwiseProduct(broadcast_to(av, r, c)), bv));
  });
}

Var neg(Var a) { return scale(a, -1.0); }

Var scale(Var a, double factor) {
  return unary(a, a.value() * factor,
               [factor](const Matrix&, const Matrix& g) -> Matrix { return g * factor; });
}

Var add_scalar(Var a, double offset) {
  return unary(a, (a.value().array() + offset).matrix(),
               [](const Matrix&, const Matrix& g) -> Matrix { return g; });
}

Var power(Var a, double exponent) {
  Matrix out = a.value().array().pow(exponent).matrix();
  return unary(a, std::move(out), [exponent](const Matrix& x, const Matrix& g) -> Matrix {
    if (exponent == 1.0) return g;
    return (g.array() * exponent * x.array().pow(exponent - 1.0)).matrix();
  });
}

Var square(Var a) {
  return unary(a, a.value().array().square().matrix(),
               [](const Matrix& x, const Matrix& g) -> Matrix {
                 return (2.0 * g.array() * x.array()).matrix();
               });
}

Var sin(Var a) {
  return unary(a, a.value().array().sin().matrix(),
               [](const Matrix& x, const Matrix& g) -> Matrix {
                 return (g.array() * x.array().cos()).matrix();
               });
}

Var cos(Var a) {
  return unary(a, a.value().array().cos().matrix(),
               [](const Matrix& x, const Matrix& g) -> Matrix {
                 return (-g.array() * x.array().sin()).matrix();
               });
}

namespace {
Eigen::ArrayXXd logistic(const Matrix& x) { return 1.0 / (1.0 + (-x.array()).exp()); }
}  // namespace

Var sigmoid(Var a) {
  return unary(a, logistic(a.value()).matrix(), [](const Matrix& x, const Matrix& g) -> Matrix {
    const Eigen::ArrayXXd s = logistic(x);
    return (g.array() * s * (1.0 - s)).matrix();
  });
}

Var swish(Var a) {
  const Eigen::ArrayXXd s = logistic(a.value());
  return unary(a, (a.value().array() * s).matrix(), [](const Matrix& x, const Matrix& g) -> Matrix {
    const Eigen::ArrayXXd s = logistic(x);
    return (g.array() * (s + x.array() * s * (1.0 - s))).matrix();
  });
}

Var softmax_rows(Var a) {
  const Matrix& x = a.value();
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double shift = x.row(i).maxCoeff();
    Eigen::RowVectorXd e = (x.row(i).array() - shift).exp().matrix();
    out.row(i) = e / e.sum();
  }
  Matrix s = out;
  return a.tape().record(std::move(out), {a}, [a, s = std::move(s)](Tape& t, const Matrix& g) {
    // J^T g per row: s * (g - <g, s>)
    const Eigen::VectorXd inner = g.cwiseProduct(s).rowwise().sum();
    Matrix gin = s.cwiseProduct(g - inner.replicate(1, g.cols()));
    t.accumulate(a, gin);
  });
}

Var sum(Var a) {
  Matrix out = Matrix::Constant(1, 1, a.value().sum());
  return a.tape().record(std::move(out), {a}, [a](Tape& t, const Matrix& g) {
    const Matrix& x = t.value(a);
    t.accumulate(a, Matrix::Constant(x.rows(), x.cols(), g(0, 0)));
  });
}

Var dot(Var a, Var b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
    throw std::invalid_argument("dot: shape mismatch");
  }
  Matrix out = Matrix::Constant(1, 1, av.cwiseProduct(bv).sum());
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (t.requires_grad(a)) t.accumulate(a, t.value(b) * g(0, 0));
    if (t.requires_grad(b)) t.accumulate(b, t.value(a) * g(0, 0));
  });
}

Var matmul(Var a, Var b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows()) {
    throw std::invalid_argument("matmul: inner dimensions " + std::to_string(av.cols()) +
                                " and " + std::to_string(bv.rows()) + " differ");
  }
  Matrix out = av * bv;
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (t.requires_grad(a)) t.accumulate(a, g * t.value(b).transpose());
    if (t.requires_grad(b)) t.accumulate(b, t.value(a).transpose() * g);
  });
}

Var add_row(Var a, Var bias) {
  const Matrix& av = a.value();
  const Matrix& bv = bias.value();
  if (bv.rows() != 1 || bv.cols() != av.cols()) {
    throw std::invalid_argument("add_row: bias must be 1x" + std::to_string(av.cols()));
  }
  Matrix out = av.rowwise() + bv.row(0);
  return a.tape().record(std::move(out), {a, bias}, [a, bias](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    if (t.requires_grad(bias)) t.accumulate(bias, g.colwise().sum());
  });
}

Var scale_rows(Var a, Var s) {
  const Matrix& av = a.value();
  const Matrix& sv = s.value();
  if (sv.cols() != 1 || sv.rows() != av.rows()) {
    throw std::invalid_argument("scale_rows: scale must be " + std::to_string(av.rows()) + "x1");
  }
  Matrix out = sv.col(0).asDiagonal() * av;
  return a.tape().record(std::move(out), {a, s}, [a, s](Tape& t, const Matrix& g) {
    const Matrix& av = t.value(a);
    const Matrix& sv = t.value(s);
    if (t.requires_grad(a)) t.accumulate(a, sv.col(0).asDiagonal() * g);
    if (t.requires_grad(s)) t.accumulate(s, g.cwiseProduct(av).rowwise().sum());
  });
}

Var weighted_sum(std::span<const double> weights, std::span<const Var> terms, double constant) {
  if (weights.size() != terms.size() || terms.empty()) {
    throw std::invalid_argument("weighted_sum: need one weight per term");
  }
  const Matrix& first = terms[0].value();
  Matrix out = Matrix::Constant(first.rows(), first.cols(), constant);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Matrix& v = terms[i].value();
    if (v.rows() != first.rows() || v.cols() != first.cols()) {
      throw std::invalid_argument("weighted_sum: shape mismatch");
    }
    if (weights[i] != 0.0) out += weights[i] * v;
  }
  std::vector<double> w(weights.begin(), weights.end());
  std::vector<Var> in(terms.begin(), terms.end());
  return terms[0].tape().record(std::move(out), terms, [w, in](Tape& t, const Matrix& g) {
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (w[i] != 0.0 && t.requires_grad(in[i])) t.accumulate(in[i], g * w[i]);
    }
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const Var& p : parts) {
    if (p.rows() != rows) throw std::invalid_argument("concat_cols: row count mismatch");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const Var& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  std::vector<Var> in(parts.begin(), parts.end());
  return parts[0].tape().record(std::move(out), parts, [in](Tape& t, const Matrix& g) {
    Eigen::Index at = 0;
    for (const Var& p : in) {
      const Eigen::Index c = t.value(p).cols();
      if (t.requires_grad(p)) t.accumulate(p, g.middleCols(at, c));
      at += c;
    }
  });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  const Matrix& av = a.value();
  if (start < 0 || count < 0 || start + count > av.cols()) {
    throw std::invalid_argument("slice_cols: range outside matrix");
  }
  Matrix out = av.middleCols(start, count);
  return a.tape().record(std::move(out), {a}, [a, start, count](Tape& t, const Matrix& g) {
    const Matrix& av = t.value(a);
    Matrix full = Matrix::Zero(av.rows(), av.cols());
    full.middleCols(start, count) = g;
    t.accumulate(a, full);
  });
}

Var col(Var a, Eigen::Index j) { return slice_cols(a, j, 1); }

Var element(Var a, Eigen::Index i, Eigen::Index j) {
  const Matrix& av = a.value();
  if (i < 0 || j < 0 || i >= av.rows() || j >= av.cols()) {
    throw std::invalid_argument("element: index outside matrix");
  }
  Matrix out = Matrix::Constant(1, 1, av(i, j));
  return a.tape().record(std::move(out), {a}, [a, i, j](Tape& t, const Matrix& g) {
    const Matrix& av = t.value(a);
    Matrix full = Matrix::Zero(av.rows(), av.cols());
    full(i, j) = g(0, 0);
    t.accumulate(a, full);
  });
}

Var reshape(Var a, Eigen::Index rows, Eigen::Index cols) {
  const Matrix& av = a.value();
  if (rows * cols != av.size()) throw std::invalid_argument("reshape: size mismatch");
  Matrix out = av.reshaped(rows, cols);
  return a.tape().record(std::move(out), {a}, [a](Tape& t, const Matrix& g) {
    const Matrix& av = t.value(a);
    t.accumulate(a, g.reshaped(av.rows(), av.cols()));
  });
}

Var linear_solve(Var K, Var f) {
  const Matrix& kv = K.value();
  const Matrix& fv = f.value();
  if (kv.rows() != kv.cols() || kv.rows() != fv.rows()) {
    throw std::invalid_argument("linear_solve: K must be square and match f");
  }
  Eigen::PartialPivLU<Matrix> lu(kv);
  Matrix u = lu.solve(fv);
  if (!u.allFinite()) throw std::runtime_error("linear_solve: singular system");
  return K.tape().record(u, {K, f}, [K, f, lu, u](Tape& t, const Matrix& g) {
    const Matrix lambda = lu.transpose().solve(g);
    if (t.requires_grad(f)) t.accumulate(f, lambda);
    if (t.requires_grad(K)) t.accumulate(K, -lambda * u.transpose());
  });
}

}  // namespace frc::ad
