#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "sampro/space.hpp"

namespace sampro {

// Atomic probability measure on the candidate grid.
struct DesignMeasure {
  std::vector<Eigen::Index> support;
  Eigen::VectorXd weights;
  CandidateSetPtr candidates;

  Eigen::Index size() const { return static_cast<Eigen::Index>(support.size()); }
  void validate() const;
};

GramMatrix gram(const EvalMatrix& eval, const DesignMeasure& design);

// Kiefer-Wolfowitz optimality certificate: sup over the whole grid of the
// inverse Christoffel form F(x)* G^{-1} F(x), compared against n + epsilon.
struct DesignCertificate {
  double sup_value = 0.0;
  double epsilon = 0.0;
  bool satisfied = false;
  Eigen::Index argmax_index = 0;
};

DesignCertificate kw_certificate(const EvalMatrix& eval, const DesignMeasure& design,
                                 double epsilon);

struct OptimizeResult {
  DesignMeasure measure;
  DesignCertificate certificate;
  bool certified = false;
  long sweeps = 0;
  double log_det = 0.0;
};

// Maximizes det G over atomic probability measures by multiplicative weight
// updates, switching to vertex-exchange steps when per-sweep improvement
// stalls. Never throws on slow convergence: an exhausted budget comes back
// with certified == false and the best measure found.
OptimizeResult optimize_design(const EvalMatrix& eval, double epsilon, long max_iters = 100000,
                               const std::optional<DesignMeasure>& seed_design = std::nullopt);

// Reduces the support to at most r+1 atoms, r = rank of the moment vectors
// {vec(F(x_k)F(x_k)*)} over the support, preserving the Gram matrix.
DesignMeasure caratheodory_reduce(const EvalMatrix& eval, const DesignMeasure& design);

// Rank of the span of all pairwise products f_i * conj(f_j) over the grid.
Eigen::Index dim_product_space(const EvalMatrix& eval);

}  // namespace sampro
