#pragma once

#include <vector>

#include "dgnn/assembly.hpp"

namespace dgnn {

struct SolveReport {
  Eigen::VectorXcd coefficients;
  double ridge = 0.0;             // relative to the mean (scaled) diagonal
  double relative_residual = 0.0;  // ||M c - rhs|| / ||rhs||
  int attempts = 0;
};

/// Solves (M + ridge * D) c = rhs with D = diag(M) after symmetric diagonal
/// scaling, by sparse LDL^H. Throws ConditioningError when the factorization
/// fails or produces a non-positive pivot.
SolveReport solve_linear(const GramSystem& system, double ridge);

/// Ridge sequence tried by solve_with_escalation: 1e-12, 1e-11, ..., 1e-6.
std::vector<double> ridge_ladder();

/// First ridge on the ladder whose factorization succeeds.
SolveReport solve_with_escalation(const GramSystem& system);

}  // namespace dgnn
