#include "sampro/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sampro {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json point_json(const CandidateSetPtr& candidates, Eigen::Index idx) {
  if (candidates->dim() == 1) return candidates->points(idx, 0);
  json arr = json::array();
  for (Eigen::Index d = 0; d < candidates->dim(); ++d) arr.push_back(candidates->points(idx, d));
  return arr;
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidInput("artifact: expected a matrix");
  Eigen::MatrixXcd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows.at(i);
    if (row.size() != static_cast<std::size_t>(m.cols()))
      throw InvalidInput("artifact: ragged matrix rows");
    for (std::size_t j = 0; j < row.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(row.at(j).at(0).get<double>(), row.at(j).at(1).get<double>());
  }
  return m;
}

json check_to_json(const ConstantCheck& c) {
  return {{"measured", c.measured},
          {"ceiling", c.ceiling},
          {"formula", c.ceiling_formula},
          {"pass", c.pass}};
}

// Artifact loaders translate malformed JSON into the library's own error type
// so callers see a uniform contract.
template <typename Fn>
auto load_guard(const char* artifact, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("artifact ") + artifact + ": " + e.what());
  }
}

}  // namespace

std::string p_key(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return buf;
}

json design_to_json(const DesignMeasure& design) {
  json j;
  j["support"] = design.support;
  json points = json::array();
  for (Eigen::Index idx : design.support) points.push_back(point_json(design.candidates, idx));
  j["points"] = std::move(points);
  j["weights"] = std::vector<double>(design.weights.data(),
                                     design.weights.data() + design.weights.size());
  return j;
}

DesignMeasure design_from_json(const json& j, CandidateSetPtr candidates) {
  return load_guard("design", [&] {
    DesignMeasure design;
    design.candidates = std::move(candidates);
    for (const auto& idx : j.at("support")) design.support.push_back(idx.get<Eigen::Index>());
    const auto& weights = j.at("weights");
    design.weights.resize(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i)
      design.weights(static_cast<Eigen::Index>(i)) = weights.at(i).get<double>();
    design.validate();
    return design;
  });
}

json multiset_to_json(const SampleMultiset& x_set) {
  json j;
  j["indices"] = x_set.indices;
  json points = json::array();
  for (Eigen::Index idx : x_set.indices) points.push_back(point_json(x_set.candidates, idx));
  j["points"] = std::move(points);
  return j;
}

SampleMultiset multiset_from_json(const json& j, CandidateSetPtr candidates) {
  return load_guard("multiset", [&] {
    SampleMultiset x_set;
    x_set.candidates = std::move(candidates);
    for (const auto& idx : j.at("indices")) x_set.indices.push_back(idx.get<Eigen::Index>());
    x_set.validate();
    return x_set;
  });
}

json certificate_to_json(const DesignCertificate& cert) {
  return {{"sup_value", cert.sup_value},
          {"epsilon", cert.epsilon},
          {"satisfied", cert.satisfied},
          {"argmax_index", cert.argmax_index}};
}

json subsample_report_to_json(const SubsampleReport& report) {
  return {{"target_size", report.target_size},
          {"achieved_size", report.achieved_size},
          {"lower_frame_bound", report.lower_frame_bound},
          {"discretization_constant", report.discretization_constant},
          {"retries_used", report.retries_used},
          {"seed", report.seed}};
}

json projection_to_json(const ProjectionOperator& op) {
  json j;
  j["kind"] = op.kind == ProjectionKind::UnweightedLeastSquares ? "unweighted-least-squares"
                                                                : "weighted-least-squares";
  j["sample_indices"] = op.sample_indices;
  json points = json::array();
  for (Eigen::Index idx : op.sample_indices) points.push_back(point_json(op.candidates, idx));
  j["sample_points"] = std::move(points);
  j["sample_weights"] = std::vector<double>(
      op.sample_weights.data(), op.sample_weights.data() + op.sample_weights.size());
  j["coeff_map"] = matrix_to_json(op.coeff_map);
  j["condition_estimate"] = op.condition_estimate;
  return j;
}

ProjectionOperator projection_from_json(const json& j, const EvalMatrix& eval) {
  return load_guard("projection", [&] {
    ProjectionOperator op;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "unweighted-least-squares")
      op.kind = ProjectionKind::UnweightedLeastSquares;
    else if (kind == "weighted-least-squares")
      op.kind = ProjectionKind::WeightedLeastSquares;
    else
      throw InvalidInput("artifact: unknown projection kind '" + kind + "'");
    op.candidates = eval.candidates;
    for (const auto& idx : j.at("sample_indices"))
      op.sample_indices.push_back(idx.get<Eigen::Index>());
    const auto& weights = j.at("sample_weights");
    op.sample_weights.resize(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i)
      op.sample_weights(static_cast<Eigen::Index>(i)) = weights.at(i).get<double>();
    op.coeff_map = matrix_from_json(j.at("coeff_map"));
    op.condition_estimate = j.at("condition_estimate").get<double>();
    if (op.coeff_map.rows() != eval.n() ||
        op.coeff_map.cols() != static_cast<Eigen::Index>(op.sample_indices.size()))
      throw InvalidInput("artifact: coeff_map shape does not match the operator");
    op.phi_table = op.coeff_map.transpose() * eval.values;
    return op;
  });
}

json report_to_json(const VerificationReport& report) {
  json j;
  j["space"] = {{"family", report.family},
                {"n", report.n},
                {"grid_size", report.grid_size},
                {"epsilon", report.epsilon},
                {"b", report.oversampling_b},
                {"seed", report.seed}};
  json design = design_to_json(report.design);
  design["certificate"] = certificate_to_json(report.certificate);
  design["mean_form"] = report.mean_form;
  design["sweeps"] = report.design_sweeps;
  design["support_size"] = report.design_support;
  design["product_dim"] = report.product_dim;
  j["design"] = std::move(design);
  j["subsample"] = {{"sup", subsample_report_to_json(report.sup_report)},
                    {"l2", subsample_report_to_json(report.l2_report)},
                    {"union_size", report.z_union.size()}};

  json constants;
  constants["nikolskii"] = check_to_json(report.nikolskii);
  constants["disc_sup"] = check_to_json(report.disc_sup);
  if (report.disc_l2_unnormalized)
    constants["disc_l2_unnormalized"] = check_to_json(*report.disc_l2_unnormalized);
  constants["projection_norm"] = check_to_json(report.projection_norm);
  constants["weighted_projection_norm"] = check_to_json(report.weighted_projection_norm);
  constants["l2_constant"] = report.l2_constant;
  j["constants"] = std::move(constants);

  json lp = json::array();
  for (const LpCheck& check : report.lp_checks)
    lp.push_back({{"p", p_key(check.p)},
                  {"direct", check.direct.value},
                  {"direct_exact", check.direct.exact},
                  {"multistarts", check.direct.multistarts},
                  {"chained", check.chained},
                  {"ceiling", check.ceiling},
                  {"pass", check.pass}});
  j["lp"] = std::move(lp);

  json functions = json::array();
  for (const FunctionReport& fr : report.functions) {
    json f = {{"name", fr.name},          {"ls_error", fr.ls_error},
              {"lm_error", fr.lm_error},  {"best_error", fr.best_error},
              {"ratio", fr.ratio},        {"lebesgue_pass", fr.lebesgue_pass}};
    json ratios, pass;
    for (const auto& [p, value] : fr.lp_ratios) ratios[p_key(p)] = value;
    for (const auto& [p, ok] : fr.lp_pass) pass[p_key(p)] = ok;
    f["lp_ratios"] = std::move(ratios);
    f["lp_pass"] = std::move(pass);
    functions.push_back(std::move(f));
  }
  j["functions"] = std::move(functions);

  j["comparison"] = {{"interpolation_ceiling", report.interpolation_ceiling},
                     {"projection_norm_beats_it", report.beats_interpolation_ceiling}};
  j["all_pass"] = report.all_pass;
  return j;
}

std::string report_to_text(const VerificationReport& report) {
  std::ostringstream out;
  out << "space: " << report.family << " n=" << report.n << " grid=" << report.grid_size
      << " epsilon=" << report.epsilon << " b=" << report.oversampling_b
      << " seed=" << report.seed << "\n";
  out << "design: support=" << report.design_support << " product_dim=" << report.product_dim
      << " sweeps=" << report.design_sweeps << " sup_form=" << report.certificate.sup_value
      << " mean_form=" << report.mean_form << "\n";
  out << "subsample: |X_sup|=" << report.sup_report.achieved_size
      << " frame=" << report.sup_report.lower_frame_bound
      << " retries=" << report.sup_report.retries_used << " |X_l2|="
      << report.l2_report.achieved_size << " frame=" << report.l2_report.lower_frame_bound
      << "\n\n";

  const auto row = [&](const std::string& name, const ConstantCheck& c) {
    out << "  " << name << ": " << c.measured << " <= " << c.ceiling << " [" << c.ceiling_formula
        << "] " << (c.pass ? "pass" : "FAIL") << "\n";
  };
  out << "constants:\n";
  row("nikolskii", report.nikolskii);
  row("disc_sup", report.disc_sup);
  if (report.disc_l2_unnormalized) row("disc_l2_unnormalized", *report.disc_l2_unnormalized);
  row("projection_norm", report.projection_norm);
  row("weighted_projection_norm", report.weighted_projection_norm);
  out << "  l2_constant (exact): " << report.l2_constant << "\n";
  for (const LpCheck& check : report.lp_checks)
    out << "  disc_lp[p=" << p_key(check.p) << "]: direct " << check.direct.value
        << (check.direct.exact ? " (exact)" : " (estimate)") << ", chained " << check.chained
        << " <= " << check.ceiling << " " << (check.pass ? "pass" : "FAIL") << "\n";
  out << "  interpolation comparison: " << report.projection_norm.measured
      << (report.beats_interpolation_ceiling ? " <= " : " > ") << report.interpolation_ceiling
      << " (n+1, informational)\n\n";

  out << "functions:\n";
  for (const FunctionReport& fr : report.functions) {
    out << "  " << fr.name << ": ls=" << fr.ls_error << " lm=" << fr.lm_error
        << " best=" << fr.best_error << " ratio=" << fr.ratio << " "
        << (fr.lebesgue_pass ? "pass" : "FAIL");
    for (const auto& [p, value] : fr.lp_ratios)
      out << " Lp[" << p_key(p) << "]=" << value << (fr.lp_pass.at(p) ? "" : " FAIL");
    out << "\n";
  }

  out << "\ntimings (s):\n";
  for (const auto& [stage, seconds] : report.stage_seconds)
    out << "  " << stage << ": " << seconds << "\n";
  out << "\nall_pass: " << (report.all_pass ? "true" : "false") << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<Eigen::VectorXd>& columns) {
  if (headers.size() != columns.size()) throw InvalidInput("csv: header/column count mismatch");
  std::ostringstream out;
  for (std::size_t i = 0; i < headers.size(); ++i)
    out << (i ? "," : "") << headers[i];
  out << "\n";
  const Eigen::Index rows = columns.empty() ? 0 : columns.front().size();
  for (const Eigen::VectorXd& col : columns)
    if (col.size() != rows) throw InvalidInput("csv: ragged columns");
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << format_double(columns[i](r));
    out << "\n";
  }
  write_file(path, out.str());
}

}  // namespace sampro
