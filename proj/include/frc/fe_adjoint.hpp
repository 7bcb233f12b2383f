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

#include "frc/autodiff.hpp"
#include "frc/mesh_fea.hpp"

namespace frc::ad {

// Differentiable K(D) u = f for the solver's fixed load.
//
// element_tensors is n_e x 6 (see mesh_fea.hpp). The backward rule solves
// K lambda = dL/du once, reusing the forward factorization, and maps
// dL/dK = -lambda u^T onto the tensor entries through the templates:
// dL/dD_{e,i} = -lambda_e^T K^i u_e. The solver must not be re-solved
// between this call and the backward pass.
Var fe_solve(fea::FeSolver& solver, Var element_tensors);

}  // namespace frc::ad
