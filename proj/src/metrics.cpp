#include "sampro/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sampro/lp.hpp"
#include "sampro/rng.hpp"
#include "sampro/testfuncs.hpp"

namespace sampro {

double nikolskii_constant(const EvalMatrix& eval, const DesignMeasure& measure) {
  const GramMatrix g = gram(eval, measure);
  if (!g.positive_definite())
    throw SingularMeasure("nikolskii_constant: measure Gram matrix is singular");
  return std::sqrt(sup_inverse_christoffel(eval, g).first);
}

namespace {

Eigen::VectorXd ground_weights_checked(const EvalMatrix& eval, const CandidateSetPtr& ground) {
  if (!same_candidates(eval.candidates, ground))
    throw InvalidInput("ground measure lives on a different candidate set");
  return ground->ground_or_uniform();
}

double lp_norm(const Eigen::VectorXd& mu, const Eigen::VectorXd& abs_values, double p) {
  if (std::isinf(p)) return abs_values.maxCoeff();
  return std::pow((mu.array() * abs_values.array().pow(p)).sum(), 1.0 / p);
}

}  // namespace

LpConstant lp_discretization_constant(const EvalMatrix& eval, const CandidateSetPtr& ground,
                                      const SampleMultiset& x_set, double p) {
  if (!(p >= 2.0)) throw InvalidInput("lp_discretization_constant: p must lie in [2, inf]");
  const Eigen::VectorXd mu = ground_weights_checked(eval, ground);
  if (std::isinf(p)) return {discretization_constant(eval, x_set), true, 0};

  const GramMatrix gx = gram(eval, x_set);
  if (!gx.positive_definite())
    throw SingularMeasure("lp_discretization_constant: multiset Gram matrix is singular");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gx.entries);
  const Eigen::MatrixXcd t = es.operatorInverseSqrt();
  // Rows of b are an orthonormal basis for L2(rho_X): coefficients c give
  // f = c^T b with ||f||_{rho_X} = ||c||_2.
  const Eigen::MatrixXcd b = t * eval.values;
  const Eigen::MatrixXcd gram_mu = (b * mu.asDiagonal() * b.adjoint()).conjugate();

  if (p == 2.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> mu_es(gram_mu, Eigen::EigenvaluesOnly);
    return {std::sqrt(std::max(0.0, mu_es.eigenvalues()(eval.n() - 1))), true, 0};
  }

  const Eigen::Index n = eval.n();
  const auto objective = [&](const Eigen::VectorXcd& c) {
    const Eigen::VectorXd abs_f = (c.transpose() * b).cwiseAbs().transpose();
    return lp_norm(mu, abs_f, p);
  };
  const auto ascend = [&](Eigen::VectorXcd c) {
    c.normalize();
    double value = objective(c);
    for (int iter = 0; iter < 500; ++iter) {
      const Eigen::VectorXcd f = (c.transpose() * b).transpose();
      const Eigen::ArrayXd scale = mu.array() * f.cwiseAbs().array().pow(p - 2.0);
      Eigen::VectorXcd grad = b.conjugate() * (scale * f.array()).matrix();
      if (grad.norm() == 0.0) break;
      grad.normalize();
      const double next = objective(grad);
      if (next <= value * (1.0 + 1e-13)) {
        value = std::max(value, next);
        break;
      }
      value = next;
      c = grad;
    }
    return value;
  };

  // Deterministic starts: the sup-norm maximizer, the L2 maximizer, then
  // random directions from a fixed stream.
  double best = 0.0;
  Eigen::Index sup_arg = 0;
  Eigen::VectorXd col_norms = b.cwiseAbs2().colwise().sum();
  col_norms.maxCoeff(&sup_arg);
  best = std::max(best, ascend(b.col(sup_arg).conjugate()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> mu_es(gram_mu);
  best = std::max(best, ascend(mu_es.eigenvectors().col(n - 1)));
  Rng rng(0x5eedf00d);
  constexpr int kRandomStarts = 32;
  for (int s = 0; s < kRandomStarts; ++s) {
    Eigen::VectorXcd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = Complex(rng.normal(), rng.normal());
    best = std::max(best, ascend(c));
  }
  return {best, false, kRandomStarts + 2};
}

double discrete_sup_constant(const EvalMatrix& eval, const SampleMultiset& x_set) {
  x_set.validate();
  if (!same_candidates(eval.candidates, x_set.candidates))
    throw InvalidInput("discrete_sup_constant: multiset lives on a different candidate set");
  if (!eval.is_real()) throw InvalidInput("discrete_sup_constant: requires a real-valued basis");
  if (!gram(eval, x_set).positive_definite())
    throw SingularMeasure("discrete_sup_constant: multiset does not norm the space");

  const Eigen::Index n = eval.n();
  const Eigen::Index m = x_set.size();
  const Eigen::MatrixXd real_eval = eval.real_values();
  Eigen::MatrixXd v(n, m);
  for (Eigen::Index k = 0; k < m; ++k) v.col(k) = real_eval.col(x_set.indices[static_cast<std::size_t>(k)]);

  // max c.F(x0) over |c.F(x_j)| <= 1, solved through its dual
  // min sum(lambda) over [V,-V] lambda = F(x0), lambda >= 0.
  Eigen::MatrixXd a(n, 2 * m);
  a.leftCols(m) = v;
  a.rightCols(m) = -v;
  const Eigen::VectorXd cost = Eigen::VectorXd::Constant(2 * m, -1.0);

  double c1 = 0.0;
  for (Eigen::Index x0 = 0; x0 < eval.grid_size(); ++x0) {
    const LpSolution sol = solve_standard_lp(a, real_eval.col(x0), cost, {});
    if (sol.status != LpStatus::Optimal)
      throw Error("discrete_sup_constant: LP solve failed at a grid point");
    c1 = std::max(c1, -sol.objective);
  }
  return c1;
}

double lp_error_ratio(const EvalMatrix& eval, const CandidateSetPtr& ground,
                      const SampleMultiset& x_set, double p, const Eigen::VectorXd& f_values) {
  if (!(p >= 1.0)) throw InvalidInput("lp_error_ratio: p must lie in [1, inf]");
  if (f_values.size() != eval.grid_size())
    throw InvalidInput("lp_error_ratio: values must cover the whole candidate grid");
  const Eigen::VectorXd mu = ground_weights_checked(eval, ground);

  const ProjectionOperator op = build_least_squares(eval, x_set);
  Eigen::VectorXcd samples(x_set.size());
  for (Eigen::Index k = 0; k < x_set.size(); ++k)
    samples(k) = f_values(x_set.indices[static_cast<std::size_t>(k)]);
  const Eigen::VectorXcd projected = apply_projection(op, samples).second;
  const Eigen::VectorXd abs_residual = (f_values.cast<Complex>() - projected).cwiseAbs();

  const double numerator = lp_norm(mu, abs_residual, p);
  const double denominator = best_uniform_error(eval, f_values);
  if (denominator <= 1e-12) {
    if (numerator <= 1e-12) return 0.0;
    throw Error("lp_error_ratio: zero best error but nonzero projection residual");
  }
  return numerator / denominator;
}

namespace {

template <typename Fn>
auto run_stage(VerificationReport& report, const std::string& stage, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto result = fn();
    report.stage_seconds.emplace_back(
        stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return result;
  } catch (const std::exception& e) {
    throw Error("stage " + stage + ": " + e.what());
  }
}

ConstantCheck make_check(double measured, double ceiling, std::string formula) {
  ConstantCheck c;
  c.measured = measured;
  c.ceiling = ceiling;
  c.ceiling_formula = std::move(formula);
  c.pass = measured <= ceiling + 1e-8;
  return c;
}

std::string family_name(BasisFamily family) {
  switch (family) {
    case BasisFamily::AlgebraicPolynomial: return "algebraic";
    case BasisFamily::TrigonometricPolynomial: return "trigonometric";
    case BasisFamily::CustomTable: return "custom";
  }
  return "unknown";
}

}  // namespace

VerificationReport verify_space(const PipelineConfig& config) {
  config.validate();
  VerificationReport report;
  const double nd = static_cast<double>(config.space.n);
  report.family = family_name(config.space.family);
  report.n = config.space.n;
  report.epsilon = config.epsilon();
  report.oversampling_b = config.subsample.oversampling_b;
  report.seed = config.subsample.seed;

  const EvalMatrix eval = run_stage(report, "space", [&] {
    const CandidateSetPtr candidates =
        build_candidate_set(config.space.domain, config.space.ground_weights);
    BasisSpec basis{config.space.family, config.space.n, config.space.table.cast<Complex>()};
    return evaluate_basis(basis, candidates);
  });
  report.grid_size = eval.grid_size();

  report.design = run_stage(report, "design", [&] {
    // A hair of slack below the requested epsilon so the Caratheodory
    // perturbation cannot push a boundary certificate past it.
    const OptimizeResult result =
        optimize_design(eval, report.epsilon * (1.0 - 1e-6), config.design.max_iters);
    report.design_sweeps = result.sweeps;
    if (!result.certified) {
      std::ostringstream msg;
      msg << "optimize_design left uncertified after " << result.sweeps
          << " sweeps (sup " << result.certificate.sup_value << ")";
      throw Error(msg.str());
    }
    return caratheodory_reduce(eval, result.measure);
  });
  report.design_support = report.design.size();
  report.product_dim = run_stage(report, "product_dim", [&] { return dim_product_space(eval); });
  report.certificate = run_stage(report, "certify", [&] {
    DesignCertificate cert = kw_certificate(eval, report.design, report.epsilon);
    if (!cert.satisfied) throw Error("certificate lost after Caratheodory reduction");
    return cert;
  });
  {
    const GramMatrix g = gram(eval, report.design);
    const Eigen::VectorXd form = inverse_christoffel(eval, g);
    double mean = 0.0;
    for (Eigen::Index k = 0; k < report.design.size(); ++k)
      mean += report.design.weights(k) * form(report.design.support[static_cast<std::size_t>(k)]);
    report.mean_form = mean;
  }

  const Eigen::Index target = config.subsample_target();
  std::tie(report.x_sup, report.sup_report) = run_stage(report, "subsample_sup", [&] {
    return subsample_to(eval, report.design, target, config.subsample.seed,
                        config.subsample.max_retries);
  });
  std::tie(report.x_l2, report.l2_report) = run_stage(report, "subsample_l2", [&] {
    DesignMeasure ground_design;
    ground_design.candidates = eval.candidates;
    const Eigen::VectorXd mu = eval.candidates->ground_or_uniform();
    for (Eigen::Index k = 0; k < mu.size(); ++k)
      if (mu(k) > 0.0) ground_design.support.push_back(k);
    ground_design.weights.resize(static_cast<Eigen::Index>(ground_design.support.size()));
    for (Eigen::Index k = 0; k < ground_design.weights.size(); ++k)
      ground_design.weights(k) = mu(ground_design.support[static_cast<std::size_t>(k)]);
    return subsample_to(eval, ground_design, target, mix_seed(config.subsample.seed, 0x9d2c),
                        config.subsample.max_retries);
  });
  report.z_union = union_multisets(report.x_sup, report.x_l2);

  run_stage(report, "project", [&] {
    report.unweighted = build_least_squares(eval, report.x_sup);
    report.weighted = build_least_squares(eval, report.design);
    report.christoffel = inverse_christoffel(eval, gram(eval, report.design));
    report.lebesgue = report.unweighted.phi_table.cwiseAbs().colwise().sum().transpose();
    return 0;
  });

  run_stage(report, "constants", [&] {
    const double nik = nikolskii_constant(eval, report.design);
    report.nikolskii = make_check(nik, std::sqrt(nd + report.epsilon), "sqrt(n+epsilon)");
    const double disc = report.sup_report.discretization_constant;
    report.disc_sup = make_check(disc, 58.0 * std::sqrt(nd), "58*sqrt(n)");
    if (target == 2 * report.n)
      report.disc_l2_unnormalized =
          make_check(disc / std::sqrt(static_cast<double>(target)), 42.0, "42");
    const double proj_ceiling =
        60.0 * std::pow(config.subsample.oversampling_b - 1.0, -1.5) * std::sqrt(nd);
    report.projection_norm =
        make_check(operator_norm(report.unweighted), proj_ceiling, "60*(b-1)^(-3/2)*sqrt(n)");
    report.weighted_projection_norm = make_check(
        operator_norm(report.weighted), std::sqrt(nd + report.epsilon), "sqrt(n+epsilon)");
    report.interpolation_ceiling = nd + 1.0;
    report.beats_interpolation_ceiling = report.projection_norm.measured <= nd + 1.0;

    const LpConstant c2 =
        lp_discretization_constant(eval, eval.candidates, report.x_l2, 2.0);
    report.l2_constant = c2.value;
    const double c_inf = disc;
    for (double p : config.metrics.p_values) {
      if (!(p >= 2.0)) throw InvalidInput("metrics.p_values must lie in [2, inf] for the pipeline");
      LpCheck check;
      check.p = p;
      check.direct = lp_discretization_constant(eval, eval.candidates, report.z_union, p);
      const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
      check.chained =
          std::sqrt(2.0) * std::pow(c2.value, 2.0 * inv_p) * std::pow(c_inf, 1.0 - 2.0 * inv_p);
      check.ceiling = 83.0 * std::pow(nd, 0.5 - inv_p);
      check.pass = check.chained <= check.ceiling + 1e-8 && check.direct.value <= check.ceiling + 1e-8;
      report.lp_checks.push_back(std::move(check));
    }
    return 0;
  });

  run_stage(report, "error_ratios", [&] {
    const Eigen::MatrixXd real_eval = eval.real_values();
    for (const TestFunctionSpec& tf : config.metrics.test_functions) {
      Eigen::VectorXd f = tf.values ? *tf.values : evaluate_test_function(tf.name, eval);
      if (f.size() != eval.grid_size())
        throw InvalidInput("test function '" + tf.name + "' has wrong length");
      FunctionReport fr;
      fr.name = tf.name;
      fr.best_error = best_uniform_error(eval, f);

      Eigen::VectorXcd samples(report.x_sup.size());
      Eigen::VectorXd real_samples(report.x_sup.size());
      for (Eigen::Index k = 0; k < report.x_sup.size(); ++k) {
        samples(k) = f(report.x_sup.indices[static_cast<std::size_t>(k)]);
        real_samples(k) = f(report.x_sup.indices[static_cast<std::size_t>(k)]);
      }
      const Eigen::VectorXcd projected = apply_projection(report.unweighted, samples).second;
      fr.ls_error = (f.cast<Complex>() - projected).cwiseAbs().maxCoeff();
      const ChebyshevFit fit = least_maximum_fit(eval, report.x_sup, real_samples);
      fr.lm_error =
          (f - real_eval.transpose() * fit.coefficients).cwiseAbs().maxCoeff();
      fr.ratio = fr.best_error <= 1e-12 ? 0.0 : fr.ls_error / fr.best_error;
      if (fr.best_error <= 1e-12 && fr.ls_error > 1e-12)
        throw Error("zero best error but nonzero residual for '" + tf.name + "'");
      fr.lebesgue_pass =
          fr.ls_error <= (1.0 + report.disc_sup.measured) * fr.best_error + 1e-8;

      for (double p : config.metrics.p_values) {
        const double ratio = lp_error_ratio(eval, eval.candidates, report.z_union, p, f);
        const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
        const double ceiling = 84.0 * std::pow(nd, std::max(0.0, 0.5 - inv_p));
        fr.lp_ratios[p] = ratio;
        fr.lp_pass[p] = ratio <= ceiling + 1e-8;
      }
      report.functions.push_back(std::move(fr));
    }
    return 0;
  });

  bool all = report.nikolskii.pass && report.disc_sup.pass && report.projection_norm.pass &&
             report.weighted_projection_norm.pass;
  if (report.disc_l2_unnormalized) all = all && report.disc_l2_unnormalized->pass;
  for (const LpCheck& check : report.lp_checks) all = all && check.pass;
  for (const FunctionReport& fr : report.functions) {
    all = all && fr.lebesgue_pass;
    for (const auto& [p, ok] : fr.lp_pass) all = all && ok;
  }
  report.all_pass = all;
  return report;
}

}  // namespace sampro
