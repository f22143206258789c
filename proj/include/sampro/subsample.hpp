#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "sampro/design.hpp"
#include "sampro/space.hpp"

namespace sampro {

// Multiset of candidate indices; repetitions carry multiplicity weight 1/|X|.
struct SampleMultiset {
  std::vector<Eigen::Index> indices;
  CandidateSetPtr candidates;

  Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()); }
  void validate() const;
};

GramMatrix gram(const EvalMatrix& eval, const SampleMultiset& x_set);

struct SubsampleReport {
  Eigen::Index target_size = 0;
  Eigen::Index achieved_size = 0;
  double lower_frame_bound = 0.0;
  double discretization_constant = 0.0;
  int retries_used = 0;
  std::uint64_t seed = 0;
};

// Raised when no retry produced a multiset under the acceptance ceiling;
// carries the best attempt for diagnostics.
class SubsampleFailure : public Error {
 public:
  SubsampleFailure(const std::string& what, SubsampleReport best)
      : Error(what), best_report(best) {}
  SubsampleReport best_report;
};

SampleMultiset draw_iid(const DesignMeasure& design, Eigen::Index count, std::uint64_t seed);

// Draws an oversampled iid pool from the design, then greedily keeps `target`
// points whose frame matrix (in the design-orthonormalized basis) has the best
// spectral profile. Accepts only if the discretization constant clears the
// 58*sqrt(n) ceiling; otherwise retries with a derived seed.
std::pair<SampleMultiset, SubsampleReport> subsample_to(const EvalMatrix& eval,
                                                        const DesignMeasure& design,
                                                        Eigen::Index target, std::uint64_t seed,
                                                        int max_retries = 8);

SampleMultiset union_multisets(const SampleMultiset& a, const SampleMultiset& b);

// sup over the candidate grid of ||f||_inf / ||f||_X for f in the span,
// where ||f||_X is the |X|-averaged l2 norm over the multiset.
double discretization_constant(const EvalMatrix& eval, const SampleMultiset& x_set);

}  // namespace sampro
