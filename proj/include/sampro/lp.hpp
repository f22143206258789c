#pragma once

#include <Eigen/Core>
#include <vector>

namespace sampro {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpOptions {
  double tol = 1e-9;       // feasibility / reduced-cost tolerance
  long max_iters = 50000;  // across both phases
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0.0;
  Eigen::VectorXd x;            // primal point, size cols(A)
  Eigen::VectorXd multipliers;  // y with A^T y >= c - tol at optimality
  std::vector<int> basis;       // final basic column indices (may include
                                // artificials >= cols(A) at zero level)
  long iterations = 0;
};

/// Solves  max c^T x  s.t.  A x = b, x >= 0  with a dense two-phase revised
/// simplex. Dantzig pricing with a permanent switch to Bland's rule once the
/// objective stalls, so cycling cannot occur. The basis is refactored from
/// scratch every iteration; problem sizes in this library are small enough
/// that robustness is worth far more than speed.
LpSolution solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c, const LpOptions& opts = {});

}  // namespace sampro
