#include "sampro/subsample.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sampro/rng.hpp"

namespace sampro {

void SampleMultiset::validate() const {
  if (!candidates) throw InvalidInput("multiset: missing candidate set");
  if (indices.empty()) throw InvalidInput("multiset: empty");
  for (Eigen::Index idx : indices)
    if (idx < 0 || idx >= candidates->size())
      throw InvalidInput("multiset: index out of candidate range");
}

GramMatrix gram(const EvalMatrix& eval, const SampleMultiset& x_set) {
  x_set.validate();
  if (!same_candidates(eval.candidates, x_set.candidates))
    throw InvalidInput("gram: multiset lives on a different candidate set");
  const Eigen::VectorXd w =
      Eigen::VectorXd::Constant(x_set.size(), 1.0 / static_cast<double>(x_set.size()));
  return gram_weighted(eval, x_set.indices, w);
}

SampleMultiset draw_iid(const DesignMeasure& design, Eigen::Index count, std::uint64_t seed) {
  design.validate();
  if (count < 1) throw InvalidInput("draw_iid: count must be >= 1");
  Eigen::VectorXd cumulative(design.size());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < design.size(); ++k) {
    acc += design.weights(k);
    cumulative(k) = acc;
  }
  Rng rng(seed);
  SampleMultiset out;
  out.candidates = design.candidates;
  out.indices.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i)
    out.indices.push_back(design.support[static_cast<std::size_t>(sample_categorical(rng, cumulative))]);
  return out;
}

SampleMultiset union_multisets(const SampleMultiset& a, const SampleMultiset& b) {
  a.validate();
  b.validate();
  if (!same_candidates(a.candidates, b.candidates))
    throw InvalidInput("union_multisets: mismatched candidate sets");
  SampleMultiset out;
  out.candidates = a.candidates;
  out.indices = a.indices;
  out.indices.insert(out.indices.end(), b.indices.begin(), b.indices.end());
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

double discretization_constant(const EvalMatrix& eval, const SampleMultiset& x_set) {
  const GramMatrix g = gram(eval, x_set);
  if (!g.positive_definite())
    throw SingularMeasure("discretization_constant: multiset does not norm the space");
  return std::sqrt(sup_inverse_christoffel(eval, g).first);
}

namespace {

// Ascending eigenvalues compared lexicographically: rank growth first, then
// the smallest eigenvalues. Equivalent to a min-eigenvalue greedy once the
// frame is full rank, but not degenerate before it.
bool spectrum_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - 1e-12) return true;
    if (a(i) > b(i) + 1e-12) return false;
  }
  return false;
}

struct Attempt {
  SampleMultiset multiset;
  SubsampleReport report;
};

Attempt run_attempt(const EvalMatrix& eval, const DesignMeasure& design,
                    const Eigen::MatrixXcd& ortho, Eigen::Index target, std::uint64_t seed) {
  const Eigen::Index n = eval.n();
  const Eigen::Index pool_size = std::max<Eigen::Index>(
      target, static_cast<Eigen::Index>(
                  std::ceil(10.0 * static_cast<double>(n) * std::log(std::max<double>(n, 2.0)))));
  const SampleMultiset pool = draw_iid(design, pool_size, seed);

  std::map<Eigen::Index, Eigen::Index> available;
  for (Eigen::Index idx : pool.indices) ++available[idx];

  Eigen::MatrixXcd frame = Eigen::MatrixXcd::Zero(n, n);
  std::vector<Eigen::Index> chosen;
  chosen.reserve(static_cast<std::size_t>(target));
  for (Eigen::Index step = 0; step < target; ++step) {
    Eigen::Index best = -1;
    Eigen::VectorXd best_spectrum;
    for (const auto& [idx, count] : available) {
      if (count == 0) continue;
      const Eigen::VectorXcd b = ortho * eval.values.col(idx);
      const Eigen::MatrixXcd updated = frame + b * b.adjoint();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(updated, Eigen::EigenvaluesOnly);
      if (best < 0 || spectrum_less(best_spectrum, es.eigenvalues())) {
        best = idx;
        best_spectrum = es.eigenvalues();
      }
    }
    const Eigen::VectorXcd b = ortho * eval.values.col(best);
    frame.noalias() += b * b.adjoint();
    --available[best];
    chosen.push_back(best);
  }
  std::sort(chosen.begin(), chosen.end());

  Attempt attempt;
  attempt.multiset.indices = std::move(chosen);
  attempt.multiset.candidates = eval.candidates;
  attempt.report.target_size = target;
  attempt.report.achieved_size = attempt.multiset.size();
  attempt.report.seed = seed;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(frame / static_cast<double>(target),
                                                     Eigen::EigenvaluesOnly);
  attempt.report.lower_frame_bound = es.eigenvalues()(0);
  attempt.report.discretization_constant =
      attempt.report.lower_frame_bound > 0.0 ? discretization_constant(eval, attempt.multiset)
                                             : std::numeric_limits<double>::infinity();
  return attempt;
}

}  // namespace

std::pair<SampleMultiset, SubsampleReport> subsample_to(const EvalMatrix& eval,
                                                        const DesignMeasure& design,
                                                        Eigen::Index target, std::uint64_t seed,
                                                        int max_retries) {
  design.validate();
  if (!same_candidates(eval.candidates, design.candidates))
    throw InvalidInput("subsample_to: design lives on a different candidate set");
  const Eigen::Index n = eval.n();
  if (target < n + 1) throw InvalidInput("subsample_to: target must be at least n+1");

  const GramMatrix g = gram(eval, design);
  if (!g.positive_definite())
    throw SingularMeasure("subsample_to: design Gram matrix is singular");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.entries);
  const Eigen::MatrixXcd ortho = es.operatorInverseSqrt();

  const double ceiling = 58.0 * std::sqrt(static_cast<double>(n)) + 1e-8;
  Attempt best;
  best.report.discretization_constant = std::numeric_limits<double>::infinity();
  for (int retry = 0; retry <= max_retries; ++retry) {
    Attempt attempt = run_attempt(eval, design, ortho, target, mix_seed(seed, retry));
    attempt.report.retries_used = retry;
    if (attempt.report.discretization_constant < best.report.discretization_constant) best = attempt;
    if (attempt.report.discretization_constant <= ceiling)
      return {std::move(attempt.multiset), attempt.report};
  }
  std::ostringstream msg;
  msg << "subsample_to: no draw met the ceiling " << ceiling << " after " << max_retries + 1
      << " attempts; best constant " << best.report.discretization_constant;
  throw SubsampleFailure(msg.str(), best.report);
}

}  // namespace sampro
