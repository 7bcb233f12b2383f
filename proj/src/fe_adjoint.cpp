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

#include "frc/fe_adjoint.hpp"

#include <stdexcept>

namespace frc::ad {

Var fe_solve(fea::FeSolver& solver, Var element_tensors) {
  fea::Vector u = solver.solve(element_tensors.value());
  const std::uint64_t generation = solver.generation();
  fea::FeSolver* s = &solver;
  Matrix value = u;
  return element_tensors.tape().record(
      std::move(value), {element_tensors},
      [s, generation, element_tensors, u = std::move(u)](Tape& t, const Matrix& g) {
        if (s->generation() != generation || !s->has_factorization()) {
          throw std::logic_error("fe_solve backward: forward factorization is no longer retained");
        }
        const fea::Vector lambda = s->adjoint_solve(g.col(0));
        t.accumulate(element_tensors, -s->template_contractions(lambda, u));
      });
}

}  // namespace frc::ad
