// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_SOLVER_HPP
#define PBBEM_SOLVER_HPP

#include <functional>
#include <vector>

#include "pbbem/operators.hpp"

namespace pbbem
{

class Preconditioner;

using LinearMap = std::function<Vector(const Vector &)>;

struct GmresOptions
{
  double tol = 1e-5;
  int max_iter = 0;  // 0: full Krylov space (size of b)
};

struct SolveReport
{
  Vector solution;
  int iterations = 0;
  // Relative preconditioned residual after each Arnoldi step.
  std::vector<double> residual_history;
  bool converged = false;
  double seconds = 0.0;
};

// Left-preconditioned GMRES without restart, zero initial guess. Converged when
// ‖P⁻¹(b − Ax)‖ ≤ tol·‖P⁻¹b‖. Running out of iterations is reported, not thrown.
SolveReport gmres(const LinearMap &apply_a, const LinearMap &apply_p, const Vector &b,
                  const GmresOptions &options = {});

SolveReport gmres(const Matrix &a, const Preconditioner &p, const Vector &b,
                  const GmresOptions &options = {});

}  // namespace pbbem

#endif  // PBBEM_SOLVER_HPP
