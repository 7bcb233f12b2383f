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

#include "frc/material.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace frc::material {

void IsotropicMatrix::validate() const {
  if (!(E > 0.0)) throw std::invalid_argument("matrix modulus E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("matrix Poisson ratio must lie in (-1, 0.5)");
}

void OrthotropicFiber::validate() const {
  if (!(E_par > 0.0) || !(E_perp > 0.0) || !(G > 0.0)) {
    throw std::invalid_argument("fiber moduli E_par, E_perp, G must be positive");
  }
  const double nu21 = nu * E_perp / E_par;
  if (!(1.0 - nu * nu21 > 0.0)) {
    throw std::invalid_argument("fiber constants violate 1 - nu12 nu21 > 0");
  }
}

Matrix3 matrix_tensor(const IsotropicMatrix& m) {
  m.validate();
  const double c = m.E / (1.0 - m.nu * m.nu);
  Matrix3 D;
  D << c, c * m.nu, 0.0, c * m.nu, c, 0.0, 0.0, 0.0, c * 0.5 * (1.0 - m.nu);
  return D;
}

Matrix3 fiber_tensor(const OrthotropicFiber& f) {
  f.validate();
  const double nu21 = f.nu * f.E_perp / f.E_par;
  const double k = 1.0 / (1.0 - f.nu * nu21);
  Matrix3 D = Matrix3::Zero();
  D(0, 0) = k * f.E_par;
  D(1, 1) = k * f.E_perp;
  D(0, 1) = D(1, 0) = k * f.nu * f.E_perp;
  D(2, 2) = f.G;
  return D;
}

Rotation rotation_matrices(double theta) {
  const double m = std::cos(theta);
  const double n = std::sin(theta);
  Rotation r;
  r.t1 << m * m, n * n, 2.0 * m * n,  //
      n * n, m * m, -2.0 * m * n,     //
      -m * n, m * n, m * m - n * n;
  r.t2 << m * m, n * n, m * n,  //
      n * n, m * m, -m * n,     //
      -2.0 * m * n, 2.0 * m * n, m * m - n * n;
  return r;
}

Matrix3 rotate_fiber_tensor(const Matrix3& fiber0, double theta) {
  const Rotation forward = rotation_matrices(theta);
  const Rotation backward = rotation_matrices(-theta);
  return backward.t1 * fiber0 * forward.t2;
}

CompositeModel CompositeModel::from(const IsotropicMatrix& m, const OrthotropicFiber& f) {
  CompositeModel model;
  model.matrix = matrix_tensor(m);
  model.fiber = fiber_tensor(f);
  model.floor = kDensityFloor * model.matrix;
  return model;
}

Matrix3 effective_tensor(double rho_m, double rho_f, double theta, double p,
                         const CompositeModel& model) {
  const Matrix3 rotated = rotate_fiber_tensor(model.fiber, theta);
  return std::pow(rho_m, p) * (rho_f * rotated + (1.0 - rho_f) * model.matrix) + model.floor;
}

Matrix3 MaterialSet::tensor(int k) const {
  const MatrixMaterial& m = k == static_cast<int>(materials.size()) ? void_material : materials.at(k);
  return matrix_tensor({m.E, m.nu});
}

double MaterialSet::mass_density(int k) const {
  return k == static_cast<int>(materials.size()) ? void_material.mass_density
                                                 : materials.at(k).mass_density;
}

Matrix3 MaterialSet::floor() const { return kDensityFloor * tensor(0); }

void MaterialSet::validate() const {
  if (materials.empty()) throw std::invalid_argument("material set needs at least one matrix material");
  for (const auto& m : materials) {
    IsotropicMatrix{m.E, m.nu}.validate();
    if (!(m.mass_density > 0.0)) {
      throw std::invalid_argument("material '" + m.name + "' needs a positive mass density");
    }
  }
  IsotropicMatrix{void_material.E, void_material.nu}.validate();
  if (!(void_material.mass_density > 0.0)) throw std::invalid_argument("void mass density must be positive");
  fiber.validate();
}

Matrix3 effective_tensor_multi(std::span<const double> densities, double rho_f, double theta,
                               double p, const MaterialSet& mats) {
  if (static_cast<int>(densities.size()) != mats.num_densities()) {
    throw std::invalid_argument("expected " + std::to_string(mats.num_densities()) +
                                " densities (materials + void)");
  }
  double total = 0.0;
  for (double d : densities) total += d;
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("densities violate partition of unity (sum = " +
                                std::to_string(total) + ")");
  }
  const Matrix3 rotated = rotate_fiber_tensor(fiber_tensor(mats.fiber), theta);
  Matrix3 D = std::pow(densities[0], p) * (rho_f * rotated + (1.0 - rho_f) * mats.tensor(0));
  for (int k = 1; k < mats.num_densities(); ++k) D += std::pow(densities[k], p) * mats.tensor(k);
  return D + mats.floor();
}

namespace {

using Coeffs = std::array<double, 4>;  // over m^2, n^2, mn, m^2 - n^2

// T1(-theta) and T2(theta) with entries written in the basis above.
const std::array<std::array<Coeffs, 3>, 3> kT1Inverse = {{
    {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, -2, 0}}},
    {{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 2, 0}}},
    {{{0, 0, 1, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}}},
}};
const std::array<std::array<Coeffs, 3>, 3> kT2 = {{
    {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}},
    {{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, -1, 0}}},
    {{{0, 0, -2, 0}, {0, 0, 2, 0}, {0, 0, 0, 1}}},
}};
const std::array<std::pair<int, int>, 6> kEntries = {{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

Eigen::RowVectorXd entry_row(const Matrix3& D) {
  Eigen::RowVectorXd r(6);
  for (int i = 0; i < 6; ++i) r[i] = D(kEntries[i].first, kEntries[i].second);
  return r;
}

}  // namespace

ad::Var rotated_fiber_field(ad::Var theta, const Matrix3& fiber0) {
  ad::Var m = ad::cos(theta);
  ad::Var n = ad::sin(theta);
  ad::Var m2 = ad::square(m);
  ad::Var n2 = ad::square(n);
  const std::array<ad::Var, 4> basis = {m2, n2, ad::mul(m, n), ad::sub(m2, n2)};

  // D_ij = sum_{a,b} C_ij[a][b] basis_a basis_b, C from the constant D0.
  std::array<std::array<std::array<double, 4>, 4>, 6> coeff{};
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kEntries[e];
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        if (fiber0(k, l) == 0.0) continue;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            coeff[e][a][b] += kT1Inverse[i][k][a] * fiber0(k, l) * kT2[l][j][b];
          }
        }
      }
    }
  }
  std::vector<ad::Var> products;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      products.push_back(ad::mul(basis[a], basis[b]));
      pairs.emplace_back(a, b);
    }
  }
  std::vector<ad::Var> columns;
  for (int e = 0; e < 6; ++e) {
    std::vector<double> w;
    for (const auto& [a, b] : pairs) w.push_back(a == b ? coeff[e][a][a] : coeff[e][a][b] + coeff[e][b][a]);
    columns.push_back(ad::weighted_sum(w, products));
  }
  return ad::concat_cols(columns);
}

ad::Var effective_tensor_field(ad::Var rho_m, ad::Var rho_f, ad::Var theta, double p,
                               const CompositeModel& model) {
  ad::Tape& tape = theta.tape();
  const Eigen::RowVectorXd matrix_row = entry_row(model.matrix);
  ad::Var fiber = rotated_fiber_field(theta, model.fiber);
  ad::Var diff = ad::add_row(fiber, tape.constant(-matrix_row));
  ad::Var mix = ad::add_row(ad::scale_rows(diff, rho_f), tape.constant(matrix_row));
  ad::Var penalized = ad::scale_rows(mix, ad::power(rho_m, p));
  return ad::add_row(penalized, tape.constant(entry_row(model.floor)));
}

ad::Var effective_tensor_multi_field(ad::Var densities, ad::Var rho_f, ad::Var theta, double p,
                                     const MaterialSet& mats) {
  ad::Tape& tape = theta.tape();
  const int k = mats.num_densities();
  if (densities.cols() != k) {
    throw std::invalid_argument("density field needs " + std::to_string(k) + " columns");
  }
  const Eigen::RowVectorXd base_row = entry_row(mats.tensor(0));
  ad::Var fiber = rotated_fiber_field(theta, fiber_tensor(mats.fiber));
  ad::Var diff = ad::add_row(fiber, tape.constant(-base_row));
  ad::Var mix = ad::add_row(ad::scale_rows(diff, rho_f), tape.constant(base_row));
  ad::Var D = ad::scale_rows(mix, ad::power(ad::col(densities, 0), p));
  Eigen::MatrixXd others(k - 1, 6);
  for (int m = 1; m < k; ++m) others.row(m - 1) = entry_row(mats.tensor(m));
  ad::Var rest = ad::matmul(ad::power(ad::slice_cols(densities, 1, k - 1), p), tape.constant(others));
  return ad::add_row(ad::add(D, rest), tape.constant(entry_row(mats.floor())));
}

}  // namespace frc::material
