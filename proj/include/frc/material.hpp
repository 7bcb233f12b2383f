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

// Plane-stress constitutive models for the fiber/matrix composite.
//
// Tensors use the Voigt ordering (sigma_11, sigma_22, sigma_12) with
// engineering shear strain. Every function here exists twice: a plain
// double version used for checks and post-processing, and a tape version
// used inside the optimization loop. The two are tested against each other.

#include "frc/autodiff.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace frc::material {

using Matrix3 = Eigen::Matrix3d;

// Added to every effective tensor as kDensityFloor * D_m0 so the stiffness
// stays positive definite as rho_m -> 0.
inline constexpr double kDensityFloor = 1e-9;

struct IsotropicMatrix {
  double E = 1.0;
  double nu = 0.3;
  void validate() const;
};

struct OrthotropicFiber {
  double E_par = 4.0;
  double E_perp = 2.0;
  double nu = 0.3;
  double G = 0.7;
  void validate() const;
};

// E/(1-nu^2) [[1, nu, 0], [nu, 1, 0], [0, 0, (1-nu)/2]]
Matrix3 matrix_tensor(const IsotropicMatrix& m);
// Fiber aligned with x.
Matrix3 fiber_tensor(const OrthotropicFiber& f);

struct Rotation {
  Matrix3 t1;  // stress transform
  Matrix3 t2;  // engineering-strain transform
};
Rotation rotation_matrices(double theta);

// T1(theta)^-1 D T2(theta), with T1^-1 taken as T1(-theta).
Matrix3 rotate_fiber_tensor(const Matrix3& fiber0, double theta);

// Constant inputs of the single-matrix composite model.
struct CompositeModel {
  Matrix3 matrix = Matrix3::Zero();
  Matrix3 fiber = Matrix3::Zero();
  Matrix3 floor = Matrix3::Zero();

  static CompositeModel from(const IsotropicMatrix& m, const OrthotropicFiber& f);
};

// rho_m^p (rho_f D_f(theta) + (1 - rho_f) D_m) + floor
Matrix3 effective_tensor(double rho_m, double rho_f, double theta, double p,
                         const CompositeModel& model);

struct MatrixMaterial {
  std::string name;
  double E = 1.0;
  double nu = 0.3;
  double mass_density = 1.0;
};

// Matrix materials in order; materials[0] is the fiber-bearing matrix. The
// void pseudo-material is appended as the last density entry.
struct MaterialSet {
  std::vector<MatrixMaterial> materials;
  MatrixMaterial void_material{"void", 1e-9, 0.3, 1e-9};
  OrthotropicFiber fiber;

  // Densities per point: materials.size() + 1 (void last).
  int num_densities() const { return static_cast<int>(materials.size()) + 1; }
  Matrix3 tensor(int k) const;  // k == materials.size() is void
  double mass_density(int k) const;
  Matrix3 floor() const;
  void validate() const;
};

// rho_1^p (rho_f D_f(theta) + (1 - rho_f) D_1) + sum_{k>=2} rho_k^p D_k
// + rho_void^p D_void + floor. Densities must sum to 1 within 1e-6.
Matrix3 effective_tensor_multi(std::span<const double> densities, double rho_f, double theta,
                               double p, const MaterialSet& mats);

// Tape versions. Field inputs are n x 1 columns (multi-material densities
// n x k); results are n x 6 in the entry order D11, D22, D33, D12, D13, D23.
ad::Var rotated_fiber_field(ad::Var theta, const Matrix3& fiber0);
ad::Var effective_tensor_field(ad::Var rho_m, ad::Var rho_f, ad::Var theta, double p,
                               const CompositeModel& model);
ad::Var effective_tensor_multi_field(ad::Var densities, ad::Var rho_f, ad::Var theta, double p,
                                     const MaterialSet& mats);

}  // namespace frc::material
