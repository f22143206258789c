#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "sampro/design.hpp"
#include "sampro/space.hpp"
#include "sampro/subsample.hpp"

namespace sampro::testing {

inline EvalMatrix interval_eval(Eigen::Index n, Eigen::Index size, double lo = -1.0,
                                double hi = 1.0) {
  BasisSpec spec;
  spec.family = BasisFamily::AlgebraicPolynomial;
  spec.n = n;
  return evaluate_basis(spec, build_candidate_set(IntervalDomain{lo, hi, size}));
}

inline EvalMatrix torus_eval(Eigen::Index n, Eigen::Index size) {
  BasisSpec spec;
  spec.family = BasisFamily::TrigonometricPolynomial;
  spec.n = n;
  return evaluate_basis(spec, build_candidate_set(TorusDomain{size}));
}

inline EvalMatrix table_eval(const Eigen::MatrixXcd& table, CandidateSetPtr candidates) {
  BasisSpec spec;
  spec.family = BasisFamily::CustomTable;
  spec.n = table.rows();
  spec.table = table;
  return evaluate_basis(spec, std::move(candidates));
}

/// Grid {-1, 0, 1} with the first n Chebyshev rows.
inline EvalMatrix three_point_eval(Eigen::Index n) { return interval_eval(n, 3); }

inline DesignMeasure make_design(CandidateSetPtr candidates, std::vector<Eigen::Index> support,
                                 const std::vector<double>& weights) {
  DesignMeasure design;
  design.candidates = std::move(candidates);
  design.support = std::move(support);
  design.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                     static_cast<Eigen::Index>(weights.size()));
  design.validate();
  return design;
}

inline SampleMultiset make_multiset(CandidateSetPtr candidates,
                                    std::vector<Eigen::Index> indices) {
  SampleMultiset x_set;
  x_set.candidates = std::move(candidates);
  x_set.indices = std::move(indices);
  x_set.validate();
  return x_set;
}

}  // namespace sampro::testing
