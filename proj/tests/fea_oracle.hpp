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

// Independent reference element routines for the FEA tests.

#include <Eigen/Dense>

#include <cmath>

namespace frc::test {

using Mat8 = Eigen::Matrix<double, 8, 8>;

// Direct 2x2 Gauss quadrature of B^T D B over a square Q4 element of side h,
// nodes counter-clockwise from the bottom-left corner.
inline Mat8 direct_quadrature(const Eigen::Matrix3d& D, double h) {
  const double g = 1.0 / std::sqrt(3.0);
  const double xi_n[4] = {-1, 1, 1, -1};
  const double eta_n[4] = {-1, -1, 1, 1};
  Mat8 K = Mat8::Zero();
  for (double xi : {-g, g}) {
    for (double eta : {-g, g}) {
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        // dN/dx = (2/h) dN/dxi for a square element.
        const double dx = 0.25 * xi_n[a] * (1 + eta * eta_n[a]) * 2.0 / h;
        const double dy = 0.25 * eta_n[a] * (1 + xi * xi_n[a]) * 2.0 / h;
        B(0, 2 * a) = dx;
        B(1, 2 * a + 1) = dy;
        B(2, 2 * a) = dy;
        B(2, 2 * a + 1) = dx;
      }
      const double detJ = h * h / 4.0;
      K += B.transpose() * D * B * detJ;
    }
  }
  return K;
}

inline Eigen::Matrix3d isotropic_plane_stress(double E, double nu) {
  Eigen::Matrix3d D;
  D << 1, nu, 0, nu, 1, 0, 0, 0, (1 - nu) / 2;
  return D * E / (1 - nu * nu);
}

// Closed-form Q4 plane-stress stiffness of the classic 99-line code
// (unit square, unit thickness).
inline Mat8 textbook_ke(double E, double nu) {
  const double k[8] = {0.5 - nu / 6,       0.125 + nu / 8, -0.25 - nu / 12, -0.125 + 3 * nu / 8,
                       -0.25 + nu / 12,    -0.125 - nu / 8, nu / 6,         0.125 - 3 * nu / 8};
  const int idx[8][8] = {{0, 1, 2, 3, 4, 5, 6, 7}, {1, 0, 7, 6, 5, 4, 3, 2}, {2, 7, 0, 5, 6, 3, 4, 1},
                         {3, 6, 5, 0, 7, 2, 1, 4}, {4, 5, 6, 7, 0, 1, 2, 3}, {5, 4, 3, 2, 1, 0, 7, 6},
                         {6, 3, 4, 1, 2, 7, 0, 5}, {7, 2, 1, 4, 3, 6, 5, 0}};
  Mat8 K;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) K(i, j) = E / (1 - nu * nu) * k[idx[i][j]];
  return K;
}

}  // namespace frc::test
