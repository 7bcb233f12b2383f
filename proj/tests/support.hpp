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

#include "frc/config.hpp"
#include "frc/neural_field.hpp"
#include "frc/optimizer.hpp"

#include <Eigen/Dense>

#include <random>

namespace frc::test {

// Relative error with an absolute floor for tiny components.
inline double rel_err(double a, double b, double floor = 1e-10) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline Eigen::Matrix3d random_symmetric(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
  return 0.5 * (a + a.transpose());
}

inline opt::Problem small_problem(const std::string& name, int nelx, int nely) {
  app::RunConfig cfg = app::default_config(name);
  cfg.nelx = nelx;
  cfg.nely = nely;
  return app::build_problem(cfg);
}

}  // namespace frc::test
