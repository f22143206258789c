#include "sampro/project.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "sampro/lp.hpp"

namespace sampro {

namespace {

ProjectionOperator build_from_weights(const EvalMatrix& eval, ProjectionKind kind,
                                      std::vector<Eigen::Index> indices, Eigen::VectorXd weights,
                                      const char* measure_name) {
  const GramMatrix g = gram_weighted(eval, indices, weights);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.entries, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(eval.n() - 1);
  if (!(lo > 1e-12 * g.trace())) {
    std::ostringstream msg;
    msg << "build_least_squares: Gram matrix of the " << measure_name
        << " is singular; it does not norm the space";
    throw SingularMeasure(msg.str());
  }
  const double cond = hi / lo;
  if (cond > 1e12) {
    std::ostringstream msg;
    msg << "build_least_squares: Gram condition " << cond << " exceeds 1e12 for the "
        << measure_name;
    throw SingularMeasure(msg.str());
  }
  if (cond > 1e8)
    std::cerr << "warning: build_least_squares ill-conditioned (" << cond << ") on the "
              << measure_name << "\n";

  ProjectionOperator op;
  op.kind = kind;
  op.candidates = eval.candidates;
  op.sample_indices = std::move(indices);
  op.sample_weights = std::move(weights);
  op.condition_estimate = cond;

  // Normal equations: conj(G) c = conj(V) W y for g(x) = c^T F(x).
  const Eigen::Index m = op.sample_count();
  Eigen::MatrixXcd v(eval.n(), m);
  for (Eigen::Index k = 0; k < m; ++k) v.col(k) = eval.values.col(op.sample_indices[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXcd rhs = v.conjugate() * op.sample_weights.asDiagonal();
  op.coeff_map = Eigen::LLT<Eigen::MatrixXcd>(g.entries.conjugate()).solve(rhs);
  op.phi_table = op.coeff_map.transpose() * eval.values;
  return op;
}

}  // namespace

ProjectionOperator build_least_squares(const EvalMatrix& eval, const SampleMultiset& x_set) {
  x_set.validate();
  if (!same_candidates(eval.candidates, x_set.candidates))
    throw InvalidInput("build_least_squares: multiset lives on a different candidate set");
  const Eigen::VectorXd w =
      Eigen::VectorXd::Constant(x_set.size(), 1.0 / static_cast<double>(x_set.size()));
  return build_from_weights(eval, ProjectionKind::UnweightedLeastSquares, x_set.indices, w,
                            "sample multiset");
}

ProjectionOperator build_least_squares(const EvalMatrix& eval, const DesignMeasure& measure) {
  measure.validate();
  if (!same_candidates(eval.candidates, measure.candidates))
    throw InvalidInput("build_least_squares: design lives on a different candidate set");
  return build_from_weights(eval, ProjectionKind::WeightedLeastSquares, measure.support,
                            measure.weights, "design measure");
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> apply_projection(const ProjectionOperator& op,
                                                               const Eigen::VectorXcd& samples) {
  if (samples.size() != op.sample_count())
    throw InvalidInput("apply_projection: sample count does not match the operator");
  Eigen::VectorXcd coeffs = op.coeff_map * samples;
  Eigen::VectorXcd values = op.phi_table.transpose() * samples;
  return {std::move(coeffs), std::move(values)};
}

double operator_norm(const ProjectionOperator& op) {
  return op.phi_table.cwiseAbs().colwise().sum().maxCoeff();
}

ChebyshevFit least_maximum_fit(const EvalMatrix& eval, const SampleMultiset& x_set,
                               const Eigen::VectorXd& samples) {
  x_set.validate();
  if (!same_candidates(eval.candidates, x_set.candidates))
    throw InvalidInput("least_maximum_fit: multiset lives on a different candidate set");
  if (samples.size() != x_set.size())
    throw InvalidInput("least_maximum_fit: sample count does not match the multiset");
  if (!eval.is_real()) throw InvalidInput("least_maximum_fit: requires a real-valued basis");

  const Eigen::Index n = eval.n();
  const Eigen::Index m = x_set.size();
  Eigen::MatrixXd v(n, m);
  const Eigen::MatrixXd real_eval = eval.real_values();
  for (Eigen::Index k = 0; k < m; ++k) v.col(k) = real_eval.col(x_set.indices[static_cast<std::size_t>(k)]);

  if (!gram(eval, x_set).positive_definite())
    throw SingularMeasure("least_maximum_fit: some nonzero function vanishes on the sample set");

  // Dual of (min t : |v_k^T c - y_k| <= t): the equality multipliers of the
  // dual recover the primal coefficients and the optimal deviation.
  Eigen::MatrixXd a(n + 1, 2 * m);
  a.topLeftCorner(n, m) = v;
  a.topRightCorner(n, m) = -v;
  a.bottomRows(1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1.0;
  Eigen::VectorXd cost(2 * m);
  cost.head(m) = samples;
  cost.tail(m) = -samples;

  const LpSolution sol = solve_standard_lp(a, b, cost, {});
  if (sol.status != LpStatus::Optimal)
    throw Error("least_maximum_fit: LP solve failed");

  ChebyshevFit fit;
  fit.coefficients = sol.multipliers.head(n);
  const Eigen::VectorXd residual = v.transpose() * fit.coefficients - samples;
  fit.error = residual.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < m; ++k)
    if (std::abs(residual(k)) >= fit.error - 1e-9) fit.active_indices.push_back(x_set.indices[static_cast<std::size_t>(k)]);
  return fit;
}

double best_uniform_error(const EvalMatrix& eval, const Eigen::VectorXd& f_values) {
  if (f_values.size() != eval.grid_size())
    throw InvalidInput("best_uniform_error: values must cover the whole candidate grid");
  SampleMultiset full;
  full.candidates = eval.candidates;
  full.indices.resize(static_cast<std::size_t>(eval.grid_size()));
  for (Eigen::Index k = 0; k < eval.grid_size(); ++k) full.indices[static_cast<std::size_t>(k)] = k;
  return least_maximum_fit(eval, full, f_values).error;
}

}  // namespace sampro
