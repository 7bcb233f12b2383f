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

#include "frc/mesh_fea.hpp"

#include "frc/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace frc::fea {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string describe_dof(int dof) {
  std::ostringstream os;
  os << "dof " << dof << " (node " << dof / 2 << ", " << (dof % 2 == 0 ? "x" : "y") << ")";
  return os.str();
}

}  // namespace

StructuredGrid::StructuredGrid(int nelx, int nely, double h) : nelx_(nelx), nely_(nely), h_(h) {
  if (nelx < 1 || nely < 1) {
    throw std::invalid_argument("grid needs nelx, nely >= 1 (got " + std::to_string(nelx) + ", " +
                                std::to_string(nely) + ")");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("grid element size h must be positive");
  }
}

StructuredGrid build_grid(int nelx, int nely, double h) { return StructuredGrid(nelx, nely, h); }

Point StructuredGrid::element_center(int e) const {
  const int i = e % nelx_;
  const int j = e / nelx_;
  return {(i + 0.5) * h_, (j + 0.5) * h_};
}

Point StructuredGrid::node_position(int node) const {
  const int i = node % (nelx_ + 1);
  const int j = node / (nelx_ + 1);
  return {i * h_, j * h_};
}

std::array<int, 4> StructuredGrid::element_nodes(int e) const {
  const int i = e % nelx_;
  const int j = e / nelx_;
  return {node_index(i, j), node_index(i + 1, j), node_index(i + 1, j + 1), node_index(i, j + 1)};
}

ElementDofs StructuredGrid::element_dofs(int e) const {
  const auto nodes = element_nodes(e);
  ElementDofs dofs{};
  for (int a = 0; a < 4; ++a) {
    dofs[2 * a] = dof_x(nodes[a]);
    dofs[2 * a + 1] = dof_y(nodes[a]);
  }
  return dofs;
}

std::vector<ElementDofs> StructuredGrid::connectivity() const {
  std::vector<ElementDofs> out;
  out.reserve(num_elements());
  for (int e = 0; e < num_elements(); ++e) out.push_back(element_dofs(e));
  return out;
}

Eigen::MatrixXd StructuredGrid::element_centers() const {
  Eigen::MatrixXd out(num_elements(), 2);
  for (int e = 0; e < num_elements(); ++e) out.row(e) = element_center(e).transpose();
  return out;
}

bool StructuredGrid::contains(const Point& p) const {
  return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= width() && p.y() <= height();
}

std::optional<int> StructuredGrid::element_containing(const Point& p) const {
  if (!contains(p)) return std::nullopt;
  const int i = std::min(static_cast<int>(std::floor(p.x() / h_)), nelx_ - 1);
  const int j = std::min(static_cast<int>(std::floor(p.y() / h_)), nely_ - 1);
  return element_index(i, j);
}

void BoundaryConditions::fix(int dof) {
  if (!is_fixed(dof)) {
    fixed_dofs.insert(std::upper_bound(fixed_dofs.begin(), fixed_dofs.end(), dof), dof);
  }
}

void BoundaryConditions::fix_node(int node) {
  fix(dof_x(node));
  fix(dof_y(node));
}

void BoundaryConditions::add_load(int dof, double force) { point_loads[dof] += force; }

void BoundaryConditions::add_spring(int dof, double stiffness) { springs[dof] += stiffness; }

void BoundaryConditions::add_edge_load(const StructuredGrid& grid, Edge edge, int component,
                                       double traction) {
  if (component != 0 && component != 1) throw std::invalid_argument("component must be 0 or 1");
  const bool horizontal = edge == Edge::Bottom || edge == Edge::Top;
  const int segments = horizontal ? grid.nelx() : grid.nely();
  const double share = 0.5 * traction * grid.h();
  for (int s = 0; s < segments; ++s) {
    for (int end = 0; end < 2; ++end) {
      const int k = s + end;
      int node = 0;
      switch (edge) {
        case Edge::Bottom: node = grid.node_index(k, 0); break;
        case Edge::Top: node = grid.node_index(k, grid.nely()); break;
        case Edge::Left: node = grid.node_index(0, k); break;
        case Edge::Right: node = grid.node_index(grid.nelx(), k); break;
      }
      add_load(2 * node + component, share);
    }
  }
}

bool BoundaryConditions::is_fixed(int dof) const {
  return std::binary_search(fixed_dofs.begin(), fixed_dofs.end(), dof);
}

Vector BoundaryConditions::load_vector(int num_dofs) const {
  Vector f = Vector::Zero(num_dofs);
  for (const auto& [dof, value] : point_loads) f[dof] += value;
  return f;
}

void BoundaryConditions::validate(int num_dofs) const {
  auto check = [num_dofs](int dof, const char* what) {
    if (dof < 0 || dof >= num_dofs) {
      throw std::invalid_argument(std::string(what) + " index " + std::to_string(dof) +
                                  " outside [0, " + std::to_string(num_dofs) + ")");
    }
  };
  for (int d : fixed_dofs) check(d, "fixed dof");
  for (const auto& [d, v] : point_loads) {
    check(d, "load dof");
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite load at " + describe_dof(d));
  }
  for (const auto& [d, k] : springs) {
    check(d, "spring dof");
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("spring stiffness must be finite and >= 0");
    }
  }
  if (input_dof) check(*input_dof, "input dof");
  if (output_dof) check(*output_dof, "output dof");
  if (fixed_dofs.empty()) throw std::invalid_argument("no fixed dofs: rigid-body modes unconstrained");
}

TemplateStiffness compute_templates(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("template element size must be positive");
  // Basis tensors in the order D11, D22, D33, D12, D13, D23.
  static const std::array<std::array<std::pair<int, int>, 2>, kTensorEntries> basis = {{
      {{{0, 0}, {0, 0}}},
      {{{1, 1}, {1, 1}}},
      {{{2, 2}, {2, 2}}},
      {{{0, 1}, {1, 0}}},
      {{{0, 2}, {2, 0}}},
      {{{1, 2}, {2, 1}}},
  }};
  static const double xi_nodes[4] = {-1.0, 1.0, 1.0, -1.0};
  static const double eta_nodes[4] = {-1.0, -1.0, 1.0, 1.0};
  const double g = 1.0 / std::sqrt(3.0);
  const double jac = 0.5 * h;  // dx/dxi
  const double det = jac * jac;

  TemplateStiffness out;
  out.h = h;
  for (auto& k : out.k) k.setZero();
  for (double xi : {-g, g}) {
    for (double eta : {-g, g}) {
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        const double dndxi = 0.25 * xi_nodes[a] * (1.0 + eta_nodes[a] * eta);
        const double dndeta = 0.25 * eta_nodes[a] * (1.0 + xi_nodes[a] * xi);
        const double dx = dndxi / jac;
        const double dy = dndeta / jac;
        B(0, 2 * a) = dx;
        B(1, 2 * a + 1) = dy;
        B(2, 2 * a) = dy;
        B(2, 2 * a + 1) = dx;
      }
      for (int i = 0; i < kTensorEntries; ++i) {
        Matrix3 Dhat = Matrix3::Zero();
        for (const auto& [r, c] : basis[i]) Dhat(r, c) = 1.0;
        out.k[i] += B.transpose() * Dhat * B * det;  // unit Gauss weights
      }
    }
  }
  // Symmetrize away roundoff so each template is exactly symmetric.
  for (auto& k : out.k) k = (0.5 * (k + k.transpose())).eval();
  return out;
}

TemplateStiffness compute_templates(const StructuredGrid& grid) { return compute_templates(grid.h()); }

std::array<double, kTensorEntries> voigt_entries(const Matrix3& D) {
  return {D(0, 0), D(1, 1), D(2, 2), D(0, 1), D(0, 2), D(1, 2)};
}

Matrix3 tensor_from_entries(const std::array<double, kTensorEntries>& d) {
  Matrix3 D;
  D << d[0], d[3], d[4], d[3], d[1], d[5], d[4], d[5], d[2];
  return D;
}

Matrix8 element_stiffness(const Matrix3& D, const TemplateStiffness& templates) {
  const double scale = std::max(D.cwiseAbs().maxCoeff(), 1e-300);
  if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("element_stiffness: elasticity tensor is not symmetric");
  }
  return element_stiffness(voigt_entries(D), templates);
}

Matrix8 element_stiffness(const std::array<double, kTensorEntries>& d,
                          const TemplateStiffness& templates) {
  Matrix8 k = Matrix8::Zero();
  for (int i = 0; i < kTensorEntries; ++i) k += d[i] * templates.k[i];
  return k;
}

FeSolver::FeSolver(std::vector<ElementDofs> connectivity, int num_dofs, BoundaryConditions bcs,
                   TemplateStiffness templates)
    : connectivity_(std::move(connectivity)),
      num_dofs_(num_dofs),
      bcs_(std::move(bcs)),
      templates_(std::move(templates)) {
  bcs_.validate(num_dofs_);
  for (const auto& dofs : connectivity_) {
    for (int d : dofs) {
      if (d < 0 || d >= num_dofs_) throw std::invalid_argument("connectivity dof out of range");
    }
  }
  load_ = bcs_.load_vector(num_dofs_);
  build_pattern();
}

FeSolver::FeSolver(const StructuredGrid& grid, BoundaryConditions bcs, TemplateStiffness templates)
    : FeSolver(grid.connectivity(), grid.num_dofs(), std::move(bcs), std::move(templates)) {}

void FeSolver::build_pattern() {
  global_to_free_.assign(num_dofs_, -1);
  free_to_global_.clear();
  for (int d = 0; d < num_dofs_; ++d) {
    if (!bcs_.is_fixed(d)) {
      global_to_free_[d] = static_cast<int>(free_to_global_.size());
      free_to_global_.push_back(d);
    }
  }
  const int n = num_free_dofs();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(connectivity_.size() * 36 + n);
  for (const auto& dofs : connectivity_) {
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        const int r = global_to_free_[dofs[a]];
        const int c = global_to_free_[dofs[b]];
        if (r >= 0 && c >= 0 && r >= c) triplets.emplace_back(r, c, 1.0);
      }
    }
  }
  for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, 1.0);
  reduced_.resize(n, n);
  reduced_.setFromTriplets(triplets.begin(), triplets.end());
  reduced_.makeCompressed();

  auto slot = [this](int r, int c) -> std::int64_t {
    const auto* outer = reduced_.outerIndexPtr();
    const auto* inner = reduced_.innerIndexPtr();
    const auto* first = inner + outer[c];
    const auto* last = inner + outer[c + 1];
    const auto* it = std::lower_bound(first, last, r);
    if (it == last || *it != r) throw std::logic_error("stiffness pattern is missing an entry");
    return it - inner;
  };

  scatter_.assign(connectivity_.size() * 64, -1);
  for (std::size_t e = 0; e < connectivity_.size(); ++e) {
    const auto& dofs = connectivity_[e];
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        const int r = global_to_free_[dofs[a]];
        const int c = global_to_free_[dofs[b]];
        if (r >= 0 && c >= 0 && r >= c) scatter_[e * 64 + a * 8 + b] = slot(r, c);
      }
    }
  }
  spring_slots_.clear();
  spring_values_.clear();
  for (const auto& [dof, k] : bcs_.springs) {
    const int r = global_to_free_[dof];
    if (r < 0 || k == 0.0) continue;
    spring_slots_.push_back(slot(r, r));
    spring_values_.push_back(k);
  }
}

void FeSolver::assemble_reduced(const Eigen::MatrixXd& element_tensors) {
  if (element_tensors.rows() != num_elements() || element_tensors.cols() != kTensorEntries) {
    throw std::invalid_argument("element tensors must be " + std::to_string(num_elements()) +
                                " x 6, got " + std::to_string(element_tensors.rows()) + " x " +
                                std::to_string(element_tensors.cols()));
  }
  double* values = reduced_.valuePtr();
  std::fill(values, values + reduced_.nonZeros(), 0.0);
  for (int e = 0; e < num_elements(); ++e) {
    Matrix8 ke = Matrix8::Zero();
    for (int i = 0; i < kTensorEntries; ++i) ke += element_tensors(e, i) * templates_.k[i];
    const std::int64_t* map = scatter_.data() + static_cast<std::size_t>(e) * 64;
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        const std::int64_t s = map[a * 8 + b];
        if (s >= 0) values[s] += ke(a, b);
      }
    }
  }
  for (std::size_t s = 0; s < spring_slots_.size(); ++s) values[spring_slots_[s]] += spring_values_[s];
}

void FeSolver::factorize() {
  factorized_ = false;
  if (!analyzed_) {
    ldlt_.analyzePattern(reduced_);
    analyzed_ = true;
  }
  ldlt_.factorize(reduced_);
  if (ldlt_.info() != Eigen::Success) {
    throw NumericError("stiffness factorization failed (numerical issue in sparse LDL^T)");
  }
  const Vector pivots = ldlt_.vectorD();
  const double largest = pivots.cwiseAbs().maxCoeff();
  const auto& perm = ldlt_.permutationP().indices();
  std::vector<int> original(perm.size());
  for (Eigen::Index k = 0; k < perm.size(); ++k) original[perm[k]] = static_cast<int>(k);
  for (Eigen::Index k = 0; k < pivots.size(); ++k) {
    if (!(pivots[k] > 1e-13 * largest)) {
      const int dof = free_to_global_[original[k]];
      throw NumericError("stiffness matrix is not positive definite: pivot " + std::to_string(k) +
                         " = " + std::to_string(pivots[k]) + " at " + describe_dof(dof) +
                         " (unconstrained mode or void region)");
    }
  }
  factorized_ = true;
  ++generation_;
}

Vector FeSolver::restrict(const Vector& full) const {
  Vector r(num_free_dofs());
  for (int i = 0; i < num_free_dofs(); ++i) r[i] = full[free_to_global_[i]];
  return r;
}

Vector FeSolver::expand(const Vector& reduced) const {
  Vector full = Vector::Zero(num_dofs_);
  for (int i = 0; i < num_free_dofs(); ++i) full[free_to_global_[i]] = reduced[i];
  return full;
}

Vector FeSolver::solve(const Eigen::MatrixXd& element_tensors) { return solve(element_tensors, load_); }

Vector FeSolver::solve(const Eigen::MatrixXd& element_tensors, const Vector& load) {
  if (load.size() != num_dofs_) throw std::invalid_argument("load vector has wrong length");
  if (!element_tensors.allFinite()) throw NumericError("non-finite element elasticity tensor");
  auto t0 = Clock::now();
  assemble_reduced(element_tensors);
  timing_.assembly_seconds += seconds_since(t0);
  t0 = Clock::now();
  factorize();
  Vector u = expand(ldlt_.solve(restrict(load)));
  timing_.factor_seconds += seconds_since(t0);
  return u;
}

Vector FeSolver::adjoint_solve(const Vector& rhs) const {
  if (!factorized_) throw std::logic_error("adjoint solve requested without a retained factorization");
  if (rhs.size() != num_dofs_) throw std::invalid_argument("adjoint rhs has wrong length");
  ++adjoint_solves_;
  return expand(ldlt_.solve(restrict(rhs)));
}

Eigen::MatrixXd FeSolver::template_contractions(const Vector& lambda, const Vector& u) const {
  Eigen::MatrixXd out(num_elements(), kTensorEntries);
  Eigen::Matrix<double, 8, 1> le, ue;
  for (int e = 0; e < num_elements(); ++e) {
    const auto& dofs = connectivity_[e];
    for (int a = 0; a < 8; ++a) {
      le[a] = lambda[dofs[a]];
      ue[a] = u[dofs[a]];
    }
    for (int i = 0; i < kTensorEntries; ++i) out(e, i) = le.dot(templates_.k[i] * ue);
  }
  return out;
}

Eigen::SparseMatrix<double> FeSolver::assemble_global(const Eigen::MatrixXd& element_tensors) const {
  if (element_tensors.rows() != num_elements() || element_tensors.cols() != kTensorEntries) {
    throw std::invalid_argument("element tensors must be n_e x 6");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(connectivity_.size() * 64);
  for (int e = 0; e < num_elements(); ++e) {
    Matrix8 ke = Matrix8::Zero();
    for (int i = 0; i < kTensorEntries; ++i) ke += element_tensors(e, i) * templates_.k[i];
    const auto& dofs = connectivity_[e];
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) triplets.emplace_back(dofs[a], dofs[b], ke(a, b));
    }
  }
  Eigen::SparseMatrix<double> K(num_dofs_, num_dofs_);
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

double compliance(const Vector& u, const Vector& f) {
  if (u.size() != f.size()) throw std::invalid_argument("compliance: u and f lengths differ");
  return f.dot(u);
}

double output_displacement(const Vector& u, const BoundaryConditions& bcs) {
  if (!bcs.output_dof) throw std::invalid_argument("no output dof defined");
  const int dof = *bcs.output_dof;
  if (dof < 0 || dof >= u.size()) throw std::invalid_argument("output dof out of range");
  if (bcs.is_fixed(dof)) throw std::invalid_argument("output dof " + std::to_string(dof) + " is fixed");
  return u[dof];
}

}  // namespace frc::fea
