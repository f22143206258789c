#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <variant>

#include "sampro/design.hpp"
#include "sampro/space.hpp"
#include "sampro/subsample.hpp"

namespace sampro {

// Exhaustive references for the iterative solvers; tiny instances only.
struct OracleResult {
  double value = 0.0;
  std::variant<DesignMeasure, SampleMultiset, Eigen::VectorXd> argopt;
  std::int64_t search_size = 0;
};

// Max det G over designs on <= max_support points with step-grid weights.
OracleResult brute_design(const EvalMatrix& eval, double weight_step, Eigen::Index max_support);

// Min discretization constant over all size-target sub-multisets of the pool.
OracleResult brute_subsample(const EvalMatrix& eval, const SampleMultiset& pool,
                             Eigen::Index target);

// Grid search for the discrete Chebyshev fit over a coefficient box.
OracleResult brute_chebyshev(const EvalMatrix& eval, const SampleMultiset& x_set,
                             const Eigen::VectorXd& samples, double coeff_grid_step);

}  // namespace sampro
