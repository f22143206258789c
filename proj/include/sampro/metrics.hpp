#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sampro/config.hpp"
#include "sampro/design.hpp"
#include "sampro/project.hpp"
#include "sampro/space.hpp"
#include "sampro/subsample.hpp"

namespace sampro {

// sup over the candidate grid of sqrt(F(x)* G^{-1} F(x)) for the measure's
// Gram; always >= sqrt(n), and <= sqrt(n+eps) at a certified design.
double nikolskii_constant(const EvalMatrix& eval, const DesignMeasure& measure);

struct LpConstant {
  double value = 0.0;
  bool exact = false;   // false means best-found lower estimate
  int multistarts = 0;
};

// sup over f in V_n of ||f||_{Lp(mu)} / ||f||_{L2(rho_X)}, mu given by the
// ground weights (uniform when absent). Exact for p = 2 (generalized
// eigenproblem) and p = inf; multistart ascent estimate for 2 < p < inf.
LpConstant lp_discretization_constant(const EvalMatrix& eval, const CandidateSetPtr& ground,
                                      const SampleMultiset& x_set, double p);

// c1 = sup over f in V_n of ||f||_inf / max_{x in X} |f(x)|, real bases only;
// exact via one small LP per grid point.
double discrete_sup_constant(const EvalMatrix& eval, const SampleMultiset& x_set);

// ||f - A(X)f||_{Lp(mu)} / inf_g ||f - g||_inf with the 0/0 -> 0 convention.
double lp_error_ratio(const EvalMatrix& eval, const CandidateSetPtr& ground,
                      const SampleMultiset& x_set, double p, const Eigen::VectorXd& f_values);

struct ConstantCheck {
  double measured = 0.0;
  double ceiling = 0.0;
  std::string ceiling_formula;
  bool pass = false;  // measured <= ceiling + 1e-8
};

struct LpCheck {
  double p = 0.0;
  LpConstant direct;     // measured on the union set
  double chained = 0.0;  // sqrt(2) * C2^(2/p) * Cinf^(1-2/p), a rigorous upper bound
  double ceiling = 0.0;
  bool pass = false;
};

struct FunctionReport {
  std::string name;
  double ls_error = 0.0;    // ||f - A(X_sup)f||_inf over the grid
  double lm_error = 0.0;    // ||f - M(X_sup)f||_inf over the grid
  double best_error = 0.0;  // inf_g ||f - g||_inf via LP
  double ratio = 0.0;       // ls_error / best_error, 0/0 -> 0
  bool lebesgue_pass = false;
  std::map<double, double> lp_ratios;  // p -> ratio on the union set
  std::map<double, bool> lp_pass;
};

struct VerificationReport {
  std::string family;
  Eigen::Index n = 0;
  Eigen::Index grid_size = 0;
  double epsilon = 0.0;
  double oversampling_b = 0.0;
  std::uint64_t seed = 0;

  DesignCertificate certificate;
  double mean_form = 0.0;  // sum of design weights times the form; equals n
  long design_sweeps = 0;
  Eigen::Index design_support = 0;
  Eigen::Index product_dim = 0;
  SubsampleReport sup_report;
  SubsampleReport l2_report;

  ConstantCheck nikolskii;
  ConstantCheck disc_sup;
  std::optional<ConstantCheck> disc_l2_unnormalized;  // only when target == 2n
  ConstantCheck projection_norm;
  ConstantCheck weighted_projection_norm;
  double l2_constant = 0.0;  // exact L2(mu)-vs-X_l2 constant feeding the chain
  std::vector<LpCheck> lp_checks;
  std::vector<FunctionReport> functions;
  double interpolation_ceiling = 0.0;  // n+1, comparison only, never a gate
  bool beats_interpolation_ceiling = false;
  bool all_pass = false;

  DesignMeasure design;
  SampleMultiset x_sup;
  SampleMultiset x_l2;
  SampleMultiset z_union;
  ProjectionOperator unweighted;
  ProjectionOperator weighted;
  Eigen::VectorXd christoffel;  // inverse Christoffel of the design, per grid point
  Eigen::VectorXd lebesgue;     // Lebesgue function of the unweighted operator

  std::vector<std::pair<std::string, double>> stage_seconds;  // report.txt only
};

// Full pipeline: design -> certify -> reduce -> subsample -> project ->
// constants -> error ratios. Stage failures are rethrown with the stage named.
VerificationReport verify_space(const PipelineConfig& config);

}  // namespace sampro
