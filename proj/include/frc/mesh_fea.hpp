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

// Structured Q4 plane-stress finite elements on a rectangular grid.
//
// Conventions: origin at the bottom-left corner, y up. Elements and nodes
// are numbered row-major with x fastest. Element e = (i, j) has nodes
// (i, j), (i+1, j), (i+1, j+1), (i, j+1) in counter-clockwise order and
// DOFs [2n, 2n+1] per node. Elasticity tensors are passed as their six
// independent Voigt entries in the order D11, D22, D33, D12, D13, D23.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace frc::fea {

using Vector = Eigen::VectorXd;
using Matrix3 = Eigen::Matrix3d;
using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Point = Eigen::Vector2d;
using ElementDofs = std::array<int, 8>;

inline constexpr int kTensorEntries = 6;

inline int dof_x(int node) { return 2 * node; }
inline int dof_y(int node) { return 2 * node + 1; }

class StructuredGrid {
 public:
  StructuredGrid(int nelx, int nely, double h);

  int nelx() const { return nelx_; }
  int nely() const { return nely_; }
  double h() const { return h_; }
  double width() const { return nelx_ * h_; }
  double height() const { return nely_ * h_; }

  int num_elements() const { return nelx_ * nely_; }
  int num_nodes() const { return (nelx_ + 1) * (nely_ + 1); }
  int num_dofs() const { return 2 * num_nodes(); }
  // v_e; identical for every element.
  double element_area() const { return h_ * h_; }

  int element_index(int i, int j) const { return j * nelx_ + i; }
  int node_index(int i, int j) const { return j * (nelx_ + 1) + i; }

  Point element_center(int e) const;
  Point node_position(int node) const;
  std::array<int, 4> element_nodes(int e) const;
  ElementDofs element_dofs(int e) const;
  std::vector<ElementDofs> connectivity() const;
  // n_e x 2 matrix of element centers, row e = center of element e.
  Eigen::MatrixXd element_centers() const;

  // Closed domain [0, W] x [0, H]; points on the far edges map to the last
  // element.
  bool contains(const Point& p) const;
  std::optional<int> element_containing(const Point& p) const;

 private:
  int nelx_;
  int nely_;
  double h_;
};

StructuredGrid build_grid(int nelx, int nely, double h);

enum class Edge { Left, Right, Bottom, Top };

struct BoundaryConditions {
  std::vector<int> fixed_dofs;
  std::map<int, double> point_loads;
  // Grounded springs: stiffness added to the diagonal of the listed DOFs.
  std::map<int, double> springs;
  std::optional<int> input_dof;
  std::optional<int> output_dof;

  void fix(int dof);
  void fix_node(int node);
  void add_load(int dof, double force);
  void add_spring(int dof, double stiffness);
  // Uniform traction `traction` (force per length, along x when component
  // is 0, along y when 1) lumped as consistent nodal loads on `edge`.
  void add_edge_load(const StructuredGrid& grid, Edge edge, int component, double traction);

  bool is_fixed(int dof) const;
  Vector load_vector(int num_dofs) const;
  // Throws std::invalid_argument on out-of-range indices or bad springs.
  void validate(int num_dofs) const;
};

struct TemplateStiffness {
  // K^i for the basis tensors of D11, D22, D33, D12, D13, D23.
  std::array<Matrix8, kTensorEntries> k;
  double h = 1.0;
};

// Six 8x8 templates integrated with 2x2 Gauss quadrature for a square
// element of side h and unit thickness.
TemplateStiffness compute_templates(double h);
TemplateStiffness compute_templates(const StructuredGrid& grid);

std::array<double, kTensorEntries> voigt_entries(const Matrix3& D);
Matrix3 tensor_from_entries(const std::array<double, kTensorEntries>& d);

// K_e = D11 K^1 + D22 K^2 + D33 K^3 + D12 K^4 + D13 K^5 + D23 K^6.
// Rejects D whose asymmetry exceeds 1e-9 relative to its largest entry.
Matrix8 element_stiffness(const Matrix3& D, const TemplateStiffness& templates);
Matrix8 element_stiffness(const std::array<double, kTensorEntries>& d,
                          const TemplateStiffness& templates);

// Sparse symmetric solver over the free DOFs. The sparsity pattern and
// fill-reducing ordering are computed once; each solve() refactorizes and
// retains the factorization for adjoint solves until the next solve().
class FeSolver {
 public:
  FeSolver(std::vector<ElementDofs> connectivity, int num_dofs, BoundaryConditions bcs,
           TemplateStiffness templates);
  FeSolver(const StructuredGrid& grid, BoundaryConditions bcs, TemplateStiffness templates);

  // element_tensors: n_e x 6. Returns full-length u with zeros on fixed DOFs.
  Vector solve(const Eigen::MatrixXd& element_tensors);
  Vector solve(const Eigen::MatrixXd& element_tensors, const Vector& load);

  // Solves K lambda = rhs with the retained factorization. Throws
  // std::logic_error when no factorization is held.
  Vector adjoint_solve(const Vector& rhs) const;

  // n_e x 6 matrix whose (e, i) entry is lambda_e^T K^i u_e.
  Eigen::MatrixXd template_contractions(const Vector& lambda, const Vector& u) const;

  // Global K over all DOFs, before boundary conditions and springs.
  Eigen::SparseMatrix<double> assemble_global(const Eigen::MatrixXd& element_tensors) const;

  const Vector& load() const { return load_; }
  const BoundaryConditions& bcs() const { return bcs_; }
  const TemplateStiffness& templates() const { return templates_; }
  int num_elements() const { return static_cast<int>(connectivity_.size()); }
  int num_dofs() const { return num_dofs_; }
  int num_free_dofs() const { return static_cast<int>(free_to_global_.size()); }

  bool has_factorization() const { return factorized_; }
  // Incremented on every successful factorization.
  std::uint64_t generation() const { return generation_; }
  std::size_t adjoint_solve_count() const { return adjoint_solves_; }

  struct Timing {
    double assembly_seconds = 0.0;
    double factor_seconds = 0.0;
  };
  const Timing& timing() const { return timing_; }
  void reset_timing() { timing_ = {}; }

 private:
  void build_pattern();
  void assemble_reduced(const Eigen::MatrixXd& element_tensors);
  void factorize();
  Vector expand(const Vector& reduced) const;
  Vector restrict(const Vector& full) const;

  std::vector<ElementDofs> connectivity_;
  int num_dofs_;
  BoundaryConditions bcs_;
  TemplateStiffness templates_;
  Vector load_;

  std::vector<int> global_to_free_;
  std::vector<int> free_to_global_;
  Eigen::SparseMatrix<double> reduced_;
  // Offset into reduced_.valuePtr() for each (element, a, b) on or below
  // the diagonal, -1 when either DOF is fixed or the entry is above it.
  std::vector<std::int64_t> scatter_;
  std::vector<std::int64_t> spring_slots_;
  std::vector<double> spring_values_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
  bool factorized_ = false;
  std::uint64_t generation_ = 0;
  mutable std::size_t adjoint_solves_ = 0;
  Timing timing_;
};

// J = f^T u.
double compliance(const Vector& u, const Vector& f);
// Signed u at the output DOF; throws when the DOF is missing or fixed.
double output_displacement(const Vector& u, const BoundaryConditions& bcs);

}  // namespace frc::fea
