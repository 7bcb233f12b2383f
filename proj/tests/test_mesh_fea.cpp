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

#include "fea_oracle.hpp"
#include "frc/error.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace frc;
using fea::Matrix8;

namespace {

Eigen::MatrixXd uniform_tensors(int ne, const Eigen::Matrix3d& D) {
  const auto d = fea::voigt_entries(D);
  Eigen::MatrixXd t(ne, fea::kTensorEntries);
  for (int i = 0; i < fea::kTensorEntries; ++i) t.col(i).setConstant(d[i]);
  return t;
}

// Left edge clamped, unit downward load at the top-right node.
fea::BoundaryConditions clamped_left(const fea::StructuredGrid& g) {
  fea::BoundaryConditions b;
  for (int j = 0; j <= g.nely(); ++j) b.fix_node(g.node_index(0, j));
  b.add_load(fea::dof_y(g.node_index(g.nelx(), g.nely())), -1.0);
  return b;
}

}  // namespace

TEST_CASE("grid construction and indexing") {
  const fea::StructuredGrid g = fea::build_grid(60, 30, 1.0);
  CHECK(g.num_elements() == 1800);
  CHECK(g.num_nodes() == 1891);
  CHECK(g.element_center(0).isApprox(fea::Point(0.5, 0.5)));
  CHECK(g.element_center(1799).isApprox(fea::Point(59.5, 29.5)));

  const fea::StructuredGrid one(1, 1, 2.0);
  CHECK(one.element_center(0).isApprox(fea::Point(1.0, 1.0)));
  CHECK(one.element_area() == doctest::Approx(4.0));

  const fea::StructuredGrid small(3, 2, 1.0);
  CHECK(small.element_containing(fea::Point(2.5, 1.5)) == 5);

  CHECK_THROWS_AS(fea::build_grid(0, 5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fea::build_grid(5, -1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fea::build_grid(5, 5, 0.0), std::invalid_argument);
}

TEST_CASE("element centers lie strictly inside the domain and areas are h^2") {
  const fea::StructuredGrid g(7, 4, 0.5);
  for (int e = 0; e < g.num_elements(); ++e) {
    const auto c = g.element_center(e);
    CHECK(c.x() > 0.0);
    CHECK(c.x() < g.width());
    CHECK(c.y() > 0.0);
    CHECK(c.y() < g.height());
    CHECK(g.element_containing(c) == e);
  }
  CHECK(g.element_area() == doctest::Approx(0.25));
}

TEST_CASE("templates recombine to the direct quadrature oracle") {
  const auto T = fea::compute_templates(1.0);
  SUBCASE("isotropic") {
    const Eigen::Matrix3d D = test::isotropic_plane_stress(1.0, 0.3);
    const Matrix8 K = fea::element_stiffness(D, T);
    CHECK((K - test::direct_quadrature(D, 1.0)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((K - test::textbook_ke(1.0, 0.3)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("random symmetric tensors, h = 2.5") {
    const auto T2 = fea::compute_templates(2.5);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
      const Eigen::Matrix3d D = test::random_symmetric(rng, 5.0);
      const Matrix8 K = fea::element_stiffness(D, T2);
      const Matrix8 R = test::direct_quadrature(D, 2.5);
      const double norm = R.cwiseAbs().rowwise().sum().maxCoeff();
      CHECK((K - R).cwiseAbs().maxCoeff() < 1e-12 * norm);
    }
  }
  SUBCASE("zero tensor") { CHECK(fea::element_stiffness(Eigen::Matrix3d::Zero(), T).isZero(0.0)); }
}

TEST_CASE("template structure") {
  const auto T = fea::compute_templates(1.0);
  for (const auto& k : T.k) CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);

  Matrix8 sum = T.k[0] + T.k[1] + T.k[2];
  CHECK((fea::element_stiffness(Eigen::Matrix3d::Identity(), T) - sum).cwiseAbs().maxCoeff() < 1e-15);

  // Perturbing the coupled D12 = D21 pair moves K_e along the fourth template.
  const Eigen::Matrix3d D = test::isotropic_plane_stress(1.0, 0.3);
  Eigen::Matrix3d Dp = D;
  const double eps = 1e-3;
  Dp(0, 1) += eps;
  Dp(1, 0) += eps;
  const Matrix8 dK = fea::element_stiffness(Dp, T) - fea::element_stiffness(D, T);
  CHECK((dK - eps * T.k[3]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("recombination is linear and annihilates translations") {
  const auto T = fea::compute_templates(1.0);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Matrix3d A = test::random_symmetric(rng);
    const Eigen::Matrix3d B = test::random_symmetric(rng);
    const Matrix8 lhs = fea::element_stiffness(Eigen::Matrix3d(A + B), T);
    const Matrix8 rhs = fea::element_stiffness(A, T) + fea::element_stiffness(B, T);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);

    Eigen::Matrix<double, 8, 1> tx;
    Eigen::Matrix<double, 8, 1> ty;
    tx << 1, 0, 1, 0, 1, 0, 1, 0;
    ty << 0, 1, 0, 1, 0, 1, 0, 1;
    CHECK((fea::element_stiffness(A, T) * tx).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((fea::element_stiffness(A, T) * ty).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("asymmetric tensors are rejected") {
  const auto T = fea::compute_templates(1.0);
  Eigen::Matrix3d D = test::isotropic_plane_stress(1.0, 0.3);
  D(0, 1) += 1e-3;
  CHECK_THROWS_AS(fea::element_stiffness(D, T), std::invalid_argument);
  D = test::isotropic_plane_stress(1.0, 0.3);
  D(1, 2) += 1e-12;  // inside the relative tolerance
  CHECK_NOTHROW(fea::element_stiffness(D, T));
}

TEST_CASE("single element solve matches a dense oracle") {
  const fea::StructuredGrid g(1, 1, 1.0);
  fea::BoundaryConditions b;
  b.fix_node(g.node_index(0, 0));
  b.fix_node(g.node_index(0, 1));
  b.add_load(fea::dof_x(g.node_index(1, 0)), 1.0);
  b.add_load(fea::dof_x(g.node_index(1, 1)), 1.0);
  const Eigen::Matrix3d D = test::isotropic_plane_stress(1.0, 0.3);
  fea::FeSolver solver(g, b, fea::compute_templates(g));
  const fea::Vector u = solver.solve(uniform_tensors(1, D));

  // Dense reference: drop the fixed rows/columns of the oracle K_e. Local
  // dofs 2..5 belong to global nodes 1 and 3.
  const test::Mat8 K = test::direct_quadrature(D, 1.0);
  const int free_dofs[4] = {2, 3, 4, 5};
  const int global[4] = {2, 3, 6, 7};
  Eigen::Matrix4d Kf;
  const Eigen::Vector4d ff(1.0, 0.0, 1.0, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Kf(i, j) = K(free_dofs[i], free_dofs[j]);
  const Eigen::Vector4d uf = Kf.ldlt().solve(ff);
  for (int i = 0; i < 4; ++i) CHECK(u[global[i]] == doctest::Approx(uf[i]).epsilon(1e-10));
  for (int d : {0, 1, 4, 5}) CHECK(u[d] == 0.0);

  // Compliance equals the strain energy at equilibrium.
  const double J = fea::compliance(u, solver.load());
  const Eigen::Vector4d uv(u[2], u[3], u[6], u[7]);
  CHECK(J == doctest::Approx(uv.dot(Kf * uv)).epsilon(1e-10));
  CHECK(J > 0.0);

  SUBCASE("output displacement at a loaded dof equals the compliance share") {
    fea::BoundaryConditions bo = b;
    bo.point_loads.clear();
    bo.add_load(fea::dof_x(g.node_index(1, 0)), 1.0);
    bo.output_dof = fea::dof_x(g.node_index(1, 0));
    fea::FeSolver s2(g, bo, fea::compute_templates(g));
    const fea::Vector u2 = s2.solve(uniform_tensors(1, D));
    CHECK(fea::output_displacement(u2, bo) == doctest::Approx(fea::compliance(u2, s2.load())));
  }
}

TEST_CASE("solve linearity and scaling") {
  const fea::StructuredGrid g(6, 3, 1.0);
  const auto b = clamped_left(g);
  fea::FeSolver solver(g, b, fea::compute_templates(g));
  const Eigen::Matrix3d D = test::isotropic_plane_stress(1.0, 0.3);
  const fea::Vector u1 = solver.solve(uniform_tensors(g.num_elements(), D));
  const fea::Vector u2 = solver.solve(uniform_tensors(g.num_elements(), Eigen::Matrix3d(2.0 * D)));
  CHECK((u1 - 2.0 * u2).cwiseAbs().maxCoeff() < 1e-12 * u1.cwiseAbs().maxCoeff());
  CHECK(fea::compliance(u2, solver.load()) ==
        doctest::Approx(0.5 * fea::compliance(u1, solver.load())).epsilon(1e-12));

  const fea::Vector z = solver.solve(uniform_tensors(g.num_elements(), D), fea::Vector::Zero(g.num_dofs()));
  CHECK(z.isZero(0.0));
  CHECK(fea::compliance(z, fea::Vector::Zero(g.num_dofs())) == 0.0);

  fea::BoundaryConditions bo = b;
  bo.output_dof = fea::dof_x(g.node_index(g.nelx(), g.nely()));
  fea::BoundaryConditions neg = bo;
  for (auto& [d, v] : neg.point_loads) v = -v;
  fea::FeSolver sp(g, bo, fea::compute_templates(g));
  fea::FeSolver sn(g, neg, fea::compute_templates(g));
  const double up = fea::output_displacement(sp.solve(uniform_tensors(g.num_elements(), D)), bo);
  const double un = fea::output_displacement(sn.solve(uniform_tensors(g.num_elements(), D)), neg);
  CHECK(un == doctest::Approx(-up));
  CHECK(fea::output_displacement(fea::Vector::Zero(g.num_dofs()), bo) == 0.0);
}

TEST_CASE("global stiffness properties") {
  const fea::StructuredGrid g(5, 4, 1.0);
  const auto b = clamped_left(g);
  fea::FeSolver solver(g, b, fea::compute_templates(g));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u01(0.1, 1.0);
  Eigen::MatrixXd tensors(g.num_elements(), fea::kTensorEntries);
  for (int e = 0; e < g.num_elements(); ++e) {
    const auto d = fea::voigt_entries(test::isotropic_plane_stress(u01(rng), 0.3));
    for (int i = 0; i < fea::kTensorEntries; ++i) tensors(e, i) = d[i];
  }
  const Eigen::MatrixXd K = Eigen::MatrixXd(solver.assemble_global(tensors));
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::VectorXd tx = Eigen::VectorXd::Zero(g.num_dofs());
  Eigen::VectorXd ty = Eigen::VectorXd::Zero(g.num_dofs());
  for (int n = 0; n < g.num_nodes(); ++n) {
    tx[fea::dof_x(n)] = 1.0;
    ty[fea::dof_y(n)] = 1.0;
  }
  CHECK((K * tx).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((K * ty).cwiseAbs().maxCoeff() < 1e-10);

  const fea::Vector u = solver.solve(tensors);
  const double energy = u.dot(K * u);
  CHECK(energy == doctest::Approx(fea::compliance(u, solver.load())).epsilon(1e-9));
}

TEST_CASE("compliance is invariant under element renumbering") {
  const fea::StructuredGrid g(4, 3, 1.0);
  const auto b = clamped_left(g);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u01(0.2, 1.0);
  std::vector<double> E(g.num_elements());
  for (double& e : E) e = u01(rng);

  auto conn = g.connectivity();
  Eigen::MatrixXd tensors(g.num_elements(), fea::kTensorEntries);
  for (int e = 0; e < g.num_elements(); ++e) {
    const auto d = fea::voigt_entries(test::isotropic_plane_stress(E[e], 0.3));
    for (int i = 0; i < fea::kTensorEntries; ++i) tensors(e, i) = d[i];
  }
  fea::FeSolver a(conn, g.num_dofs(), b, fea::compute_templates(g));
  const double Ja = fea::compliance(a.solve(tensors), a.load());

  std::vector<int> perm(g.num_elements());
  for (int i = 0; i < g.num_elements(); ++i) perm[i] = g.num_elements() - 1 - i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<fea::ElementDofs> conn2(conn.size());
  Eigen::MatrixXd tensors2(g.num_elements(), fea::kTensorEntries);
  for (int i = 0; i < g.num_elements(); ++i) {
    conn2[i] = conn[perm[i]];
    tensors2.row(i) = tensors.row(perm[i]);
  }
  fea::FeSolver bsolver(conn2, g.num_dofs(), b, fea::compute_templates(g));
  const double Jb = fea::compliance(bsolver.solve(tensors2), bsolver.load());
  CHECK(Jb == doctest::Approx(Ja).epsilon(1e-10));
}

TEST_CASE("springs add to the diagonal") {
  const fea::StructuredGrid g(1, 1, 1.0);
  fea::BoundaryConditions b;
  b.fix_node(g.node_index(0, 0));
  b.fix_node(g.node_index(0, 1));
  const int d = fea::dof_x(g.node_index(1, 0));
  b.add_load(d, 1.0);
  const Eigen::Matrix3d D = test::isotropic_plane_stress(1.0, 0.3);
  fea::FeSolver plain(g, b, fea::compute_templates(g));
  const double u0 = plain.solve(uniform_tensors(1, D))[d];
  b.add_spring(d, 0.7);
  fea::FeSolver sprung(g, b, fea::compute_templates(g));
  const double u1 = sprung.solve(uniform_tensors(1, D))[d];
  CHECK(std::abs(u1) < std::abs(u0));

  // Same system with the spring folded into a dense oracle.
  const test::Mat8 K = test::direct_quadrature(D, 1.0);
  Eigen::Matrix4d Kf;
  const int fd[4] = {2, 3, 4, 5};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Kf(i, j) = K(fd[i], fd[j]);
  Kf(0, 0) += 0.7;
  const Eigen::Vector4d uf = Kf.ldlt().solve(Eigen::Vector4d(1, 0, 0, 0));
  CHECK(u1 == doctest::Approx(uf[0]).epsilon(1e-10));
}

TEST_CASE("edge loads are consistent nodal loads") {
  const fea::StructuredGrid g(4, 2, 0.5);
  fea::BoundaryConditions b;
  b.add_edge_load(g, fea::Edge::Top, 1, -2.0);
  const fea::Vector f = b.load_vector(g.num_dofs());
  CHECK(f.sum() == doctest::Approx(-2.0 * g.width()));
  CHECK(f[fea::dof_y(g.node_index(0, 2))] == doctest::Approx(-0.5));
  CHECK(f[fea::dof_y(g.node_index(1, 2))] == doctest::Approx(-1.0));
}

TEST_CASE("boundary condition validation") {
  const fea::StructuredGrid g(2, 2, 1.0);
  fea::BoundaryConditions b;
  b.add_load(3, 1.0);
  CHECK_THROWS_AS(b.validate(g.num_dofs()), std::invalid_argument);  // nothing fixed
  b.fix(0);
  b.fix(100);
  CHECK_THROWS_AS(b.validate(g.num_dofs()), std::invalid_argument);
}

TEST_CASE("unconstrained modes are reported") {
  const fea::StructuredGrid g(2, 1, 1.0);
  fea::BoundaryConditions b;
  b.fix(fea::dof_x(0));  // rotation and y translation remain free
  b.add_load(fea::dof_y(g.node_index(2, 1)), 1.0);
  fea::FeSolver solver(g, b, fea::compute_templates(g));
  CHECK_THROWS_AS(solver.solve(uniform_tensors(g.num_elements(), test::isotropic_plane_stress(1.0, 0.3))),
                  NumericError);
}

TEST_CASE("output displacement rejects a fixed dof") {
  fea::BoundaryConditions b;
  b.fix(0);
  b.output_dof = 0;
  CHECK_THROWS_AS(fea::output_displacement(fea::Vector::Zero(8), b), std::invalid_argument);
  b.output_dof.reset();
  CHECK_THROWS_AS(fea::output_displacement(fea::Vector::Zero(8), b), std::invalid_argument);
}

TEST_CASE("adjoint solve reuses the factorization") {
  const fea::StructuredGrid g(3, 2, 1.0);
  const auto b = clamped_left(g);
  fea::FeSolver solver(g, b, fea::compute_templates(g));
  CHECK_THROWS_AS(solver.adjoint_solve(fea::Vector::Zero(g.num_dofs())), std::logic_error);
  const auto tensors = uniform_tensors(g.num_elements(), test::isotropic_plane_stress(1.0, 0.3));
  const fea::Vector u = solver.solve(tensors);
  const auto gen = solver.generation();
  const fea::Vector lam = solver.adjoint_solve(solver.load());
  CHECK(solver.generation() == gen);
  CHECK((lam - u).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(solver.adjoint_solve_count() == 1);
}
