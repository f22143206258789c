#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "sampro/design.hpp"
#include "sampro/space.hpp"
#include "sampro/subsample.hpp"

namespace sampro {

enum class ProjectionKind { UnweightedLeastSquares, WeightedLeastSquares };

// Sampling projection A f = sum_k f(x_k) phi_k. coeff_map sends sample values
// to basis coefficients; phi_table holds the phi_k on the candidate grid.
struct ProjectionOperator {
  ProjectionKind kind = ProjectionKind::UnweightedLeastSquares;
  std::vector<Eigen::Index> sample_indices;
  Eigen::VectorXd sample_weights;
  Eigen::MatrixXcd coeff_map;   // n x |X|
  Eigen::MatrixXcd phi_table;   // |X| x M
  double condition_estimate = 0.0;
  CandidateSetPtr candidates;

  Eigen::Index sample_count() const { return static_cast<Eigen::Index>(sample_indices.size()); }
};

ProjectionOperator build_least_squares(const EvalMatrix& eval, const SampleMultiset& x_set);
ProjectionOperator build_least_squares(const EvalMatrix& eval, const DesignMeasure& measure);

// coefficients = coeff_map * samples; values = phi_table^T * samples.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> apply_projection(const ProjectionOperator& op,
                                                               const Eigen::VectorXcd& samples);

// Exact sup over the candidate grid of the Lebesgue function sum_k |phi_k(x)|.
double operator_norm(const ProjectionOperator& op);

// Discrete Chebyshev fit min_g max_{x in X} |g(x) - f(x)|, real scalars only.
struct ChebyshevFit {
  Eigen::VectorXd coefficients;
  double error = 0.0;
  std::vector<Eigen::Index> active_indices;
};

ChebyshevFit least_maximum_fit(const EvalMatrix& eval, const SampleMultiset& x_set,
                               const Eigen::VectorXd& samples);

// Chebyshev fit over the whole candidate grid; the error is the reference
// inf_{g} ||f - g||_inf used by the error-ratio checks.
double best_uniform_error(const EvalMatrix& eval, const Eigen::VectorXd& f_values);

}  // namespace sampro
