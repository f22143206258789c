#include "sampro/pipeline.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "sampro/io.hpp"
#include "sampro/oracle.hpp"
#include "sampro/rng.hpp"
#include "sampro/testfuncs.hpp"

namespace sampro {

namespace {

using nlohmann::json;

EvalMatrix eval_from_config(const PipelineConfig& config) {
  const CandidateSetPtr candidates =
      build_candidate_set(config.space.domain, config.space.ground_weights);
  BasisSpec basis{config.space.family, config.space.n, config.space.table.cast<Complex>()};
  return evaluate_basis(basis, candidates);
}

double gram_det(const EvalMatrix& eval, const DesignMeasure& measure) {
  Eigen::LLT<Eigen::MatrixXcd> llt(gram(eval, measure).entries);
  if (llt.info() != Eigen::Success) return 0.0;
  return std::exp(2.0 * llt.matrixLLT().diagonal().real().array().log().sum());
}

Eigen::Index oracle_pool_size(Eigen::Index n, Eigen::Index target) {
  return std::max<Eigen::Index>(
      target, static_cast<Eigen::Index>(
                  std::ceil(10.0 * static_cast<double>(n) * std::log(std::max<double>(n, 2.0)))));
}

json oracle_to_json(const OracleCheckReport& r) {
  json j;
  j["design"] = {{"optimized_det", r.optimized_det},
                 {"brute_det", r.brute_det},
                 {"rel_gap", r.det_rel_gap},
                 {"nodes", r.design_nodes}};
  j["subsample"] = {{"greedy_constant", r.greedy_constant},
                    {"brute_constant", r.brute_constant},
                    {"quality_ratio", r.quality_ratio},
                    {"nodes", r.subsample_nodes}};
  if (r.lm_error)
    j["chebyshev"] = {{"lm_error", *r.lm_error},
                      {"brute_error", *r.brute_error},
                      {"gap", *r.cheb_gap},
                      {"nodes", r.cheb_nodes}};
  return j;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_report_csvs(const PipelineConfig& config, const VerificationReport& report,
                       const std::string& dir) {
  const CandidateSetPtr candidates = report.design.candidates;
  Eigen::VectorXd index(candidates->size());
  for (Eigen::Index k = 0; k < candidates->size(); ++k) index(k) = static_cast<double>(k);
  const Eigen::VectorXd coordinate = candidates->points.col(0);
  write_csv(join(dir, "christoffel.csv"), {"index", "point", "inverse_christoffel"},
            {index, coordinate, report.christoffel});
  write_csv(join(dir, "lebesgue.csv"), {"index", "point", "lebesgue"},
            {index, coordinate, report.lebesgue});
  (void)config;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

OracleCheckReport run_oracle_check(const PipelineConfig& config) {
  const EvalMatrix eval = eval_from_config(config);
  if (eval.grid_size() > 8 || eval.n() > 3)
    throw Error(
        "stage oracle: instance too large for oracle checks (needs <= 8 candidates and n <= 3)");

  OracleCheckReport report;
  const OptimizeResult opt = optimize_design(eval, config.epsilon(), config.design.max_iters);
  if (!opt.certified) throw Error("stage oracle: optimize_design left uncertified");
  const DesignMeasure reduced = caratheodory_reduce(eval, opt.measure);

  // Every optimal moment matrix admits a representation on at most
  // dim_product_space + 1 atoms, so the brute search below provably covers an
  // optimizer at this support cap.
  const Eigen::Index support_cap =
      std::min<Eigen::Index>(eval.grid_size(), dim_product_space(eval) + 1);
  const OracleResult brute = brute_design(eval, 0.01, support_cap);
  report.optimized_det = gram_det(eval, opt.measure);
  report.brute_det = brute.value;
  report.det_rel_gap =
      std::abs(report.optimized_det - report.brute_det) / std::max(report.brute_det, 1e-300);
  report.design_nodes = brute.search_size;

  const Eigen::Index target = eval.n() + 1;
  const auto [x_set, sub_report] =
      subsample_to(eval, reduced, target, config.subsample.seed, config.subsample.max_retries);
  const SampleMultiset pool =
      draw_iid(reduced, oracle_pool_size(eval.n(), target), sub_report.seed);
  const OracleResult sub_brute = brute_subsample(eval, pool, target);
  report.greedy_constant = sub_report.discretization_constant;
  report.brute_constant = sub_brute.value;
  report.quality_ratio = report.greedy_constant / report.brute_constant;
  report.subsample_nodes = sub_brute.search_size;

  if (eval.n() <= 2 && eval.is_real()) {
    const TestFunctionSpec& tf = config.metrics.test_functions.front();
    const Eigen::VectorXd f = tf.values ? *tf.values : evaluate_test_function(tf.name, eval);
    Eigen::VectorXd samples(x_set.size());
    for (Eigen::Index k = 0; k < x_set.size(); ++k)
      samples(k) = f(x_set.indices[static_cast<std::size_t>(k)]);
    const ChebyshevFit fit = least_maximum_fit(eval, x_set, samples);
    const OracleResult cheb = brute_chebyshev(eval, x_set, samples, 1e-3);
    report.lm_error = fit.error;
    report.brute_error = cheb.value;
    report.cheb_gap = std::abs(fit.error - cheb.value);
    report.cheb_nodes = cheb.search_size;
  }
  return report;
}

int run_verify(const PipelineConfig& config, const std::string& output_dir) {
  return guarded([&] {
    VerificationReport report;
    try {
      report = verify_space(config);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    json report_json = report_to_json(report);
    if (config.oracle_check) report_json["oracle_check"] = oracle_to_json(run_oracle_check(config));

    ensure_dir(output_dir);
    json design_json = design_to_json(report.design);
    design_json["certificate"] = certificate_to_json(report.certificate);
    write_file(join(output_dir, "design.json"), design_json.dump(2) + "\n");

    json samples_json;
    json x_sup = multiset_to_json(report.x_sup);
    x_sup["report"] = subsample_report_to_json(report.sup_report);
    json x_l2 = multiset_to_json(report.x_l2);
    x_l2["report"] = subsample_report_to_json(report.l2_report);
    samples_json["x_sup"] = std::move(x_sup);
    samples_json["x_l2"] = std::move(x_l2);
    samples_json["union"] = multiset_to_json(report.z_union);
    write_file(join(output_dir, "samples.json"), samples_json.dump(2) + "\n");

    json projection_json;
    projection_json["unweighted"] = projection_to_json(report.unweighted);
    projection_json["weighted"] = projection_to_json(report.weighted);
    write_file(join(output_dir, "projection.json"), projection_json.dump(2) + "\n");

    write_file(join(output_dir, "report.json"), report_json.dump(2) + "\n");
    const std::string text = report_to_text(report);
    write_file(join(output_dir, "report.txt"), text);
    write_report_csvs(config, report, output_dir);
    std::cout << text;
    return report.all_pass ? 0 : 2;
  });
}

int run_design_stage(const PipelineConfig& config, const std::string& output_dir) {
  return guarded([&] {
    const EvalMatrix eval = eval_from_config(config);
    const OptimizeResult result =
        optimize_design(eval, config.epsilon() * (1.0 - 1e-6), config.design.max_iters);
    if (!result.certified) throw Error("stage design: optimize_design left uncertified");
    const DesignMeasure reduced = caratheodory_reduce(eval, result.measure);
    const DesignCertificate cert = kw_certificate(eval, reduced, config.epsilon());
    if (!cert.satisfied) throw Error("stage design: certificate lost after reduction");

    ensure_dir(output_dir);
    json j = design_to_json(reduced);
    j["certificate"] = certificate_to_json(cert);
    write_file(join(output_dir, "design.json"), j.dump(2) + "\n");
    std::cout << "design: " << reduced.size() << " atoms, sup_form " << cert.sup_value << "\n";
    return 0;
  });
}

int run_subsample_stage(const PipelineConfig& config, const std::string& output_dir) {
  return guarded([&] {
    const EvalMatrix eval = eval_from_config(config);
    const json design_json = json::parse(read_file(join(output_dir, "design.json")));
    const DesignMeasure design = design_from_json(design_json, eval.candidates);

    const Eigen::Index target = config.subsample_target();
    const auto [x_sup, sup_report] = subsample_to(eval, design, target, config.subsample.seed,
                                                  config.subsample.max_retries);
    DesignMeasure ground_design;
    ground_design.candidates = eval.candidates;
    const Eigen::VectorXd mu = eval.candidates->ground_or_uniform();
    for (Eigen::Index k = 0; k < mu.size(); ++k)
      if (mu(k) > 0.0) ground_design.support.push_back(k);
    ground_design.weights.resize(static_cast<Eigen::Index>(ground_design.support.size()));
    for (Eigen::Index k = 0; k < ground_design.weights.size(); ++k)
      ground_design.weights(k) = mu(ground_design.support[static_cast<std::size_t>(k)]);
    const auto [x_l2, l2_report] =
        subsample_to(eval, ground_design, target, mix_seed(config.subsample.seed, 0x9d2c),
                     config.subsample.max_retries);

    json samples_json;
    json sup_json = multiset_to_json(x_sup);
    sup_json["report"] = subsample_report_to_json(sup_report);
    json l2_json = multiset_to_json(x_l2);
    l2_json["report"] = subsample_report_to_json(l2_report);
    samples_json["x_sup"] = std::move(sup_json);
    samples_json["x_l2"] = std::move(l2_json);
    samples_json["union"] = multiset_to_json(union_multisets(x_sup, x_l2));
    write_file(join(output_dir, "samples.json"), samples_json.dump(2) + "\n");
    std::cout << "subsample: |X_sup|=" << x_sup.size() << " constant "
              << sup_report.discretization_constant << "\n";
    return 0;
  });
}

int run_project_stage(const PipelineConfig& config, const std::string& output_dir) {
  return guarded([&] {
    const EvalMatrix eval = eval_from_config(config);
    const json design_json = json::parse(read_file(join(output_dir, "design.json")));
    const DesignMeasure design = design_from_json(design_json, eval.candidates);
    const json samples_json = json::parse(read_file(join(output_dir, "samples.json")));
    const SampleMultiset x_sup = multiset_from_json(samples_json.at("x_sup"), eval.candidates);

    json projection_json;
    projection_json["unweighted"] = projection_to_json(build_least_squares(eval, x_sup));
    projection_json["weighted"] = projection_to_json(build_least_squares(eval, design));
    write_file(join(output_dir, "projection.json"), projection_json.dump(2) + "\n");
    std::cout << "project: wrote projection.json\n";
    return 0;
  });
}

int run_oracle_stage(const PipelineConfig& config, const std::string& output_dir) {
  return guarded([&] {
    const OracleCheckReport report = run_oracle_check(config);
    ensure_dir(output_dir);
    const json j = oracle_to_json(report);
    write_file(join(output_dir, "oracle.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
  });
}

}  // namespace sampro
