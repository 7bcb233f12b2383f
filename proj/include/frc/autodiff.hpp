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

// Define-by-run reverse-mode differentiation over dense matrices.
//
// Every value on the tape is an Eigen matrix (scalars are 1x1). Operations
// append a node holding the forward value and a closure that maps the
// node's output gradient onto its inputs. Nodes are appended in evaluation
// order, so one reverse sweep over the tape visits them topologically.

#include <Eigen/Dense>

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace frc::ad {

using Matrix = Eigen::MatrixXd;

class Tape;

class Var {
 public:
  Var() = default;

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  // Value of a 1x1 node.
  double scalar() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Receives the gradient of the loss with respect to the node's value and
// accumulates contributions into the node's inputs via Tape::accumulate.
using BackwardFn = std::function<void(Tape&, const Matrix& grad_out)>;

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that never receives a gradient (mesh data, frequencies, loads).
  Var constant(Matrix value);
  // Trainable leaf.
  Var parameter(Matrix value);

  // Appends an operation node. The node requires a gradient iff any input
  // does; otherwise the closure is dropped.
  Var record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var record(Matrix value, std::span<const Var> inputs, BackwardFn backward);

  // Seeds dL/dL = 1 and sweeps the tape once in reverse.
  void backward(Var loss);

  // Gradient accumulated at `v` by the last backward(); zeros if none flowed.
  Matrix grad(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(v.id()).requires_grad; }
  const Matrix& value(Var v) const { return nodes_.at(v.id()).value; }

  void accumulate(Var v, const Matrix& contribution);

  std::size_t size() const { return nodes_.size(); }
  // Number of closures invoked by the last backward().
  std::size_t last_backward_visits() const { return last_visits_; }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    bool has_grad = false;
    BackwardFn backward;
  };

  Var push(Matrix value, bool requires_grad, BackwardFn backward);

  // deque keeps references returned by value() stable while recording.
  std::deque<Node> nodes_;
  std::size_t last_visits_ = 0;
};

// Elementwise arithmetic. Binary operations accept equal shapes or a 1x1
// operand broadcast against the other.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var neg(Var a);
Var scale(Var a, double factor);
Var add_scalar(Var a, double offset);
// a^exponent elementwise; a must be positive where exponent is non-integer.
Var power(Var a, double exponent);
Var square(Var a);
Var sin(Var a);
Var cos(Var a);
Var sigmoid(Var a);
// x * sigmoid(x)
Var swish(Var a);
// Row-wise softmax of an n x k matrix.
Var softmax_rows(Var a);

// Reductions and linear algebra.
Var sum(Var a);
Var dot(Var a, Var b);
Var matmul(Var a, Var b);
// a (n x k) + bias (1 x k) broadcast over rows.
Var add_row(Var a, Var bias);
// Row i of a (n x k) multiplied by s(i) for s of shape n x 1.
Var scale_rows(Var a, Var s);
// constant + sum_i weights[i] * terms[i]; all terms share one shape.
Var weighted_sum(std::span<const double> weights, std::span<const Var> terms,
                 double constant = 0.0);

// Shape manipulation.
Var concat_cols(std::span<const Var> parts);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
Var col(Var a, Eigen::Index j);
Var element(Var a, Eigen::Index i, Eigen::Index j = 0);
Var reshape(Var a, Eigen::Index rows, Eigen::Index cols);

// Dense solve K u = f. Backward: K^T lambda = gbar, dK = -lambda u^T, df = lambda.
Var linear_solve(Var K, Var f);

}  // namespace frc::ad
