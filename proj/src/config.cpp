#include "sampro/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "sampro/testfuncs.hpp"

namespace sampro {

using nlohmann::json;

double PipelineConfig::epsilon() const {
  return design.epsilon.value_or(0.01 * static_cast<double>(space.n));
}

Eigen::Index PipelineConfig::subsample_target() const {
  return static_cast<Eigen::Index>(
      std::ceil(subsample.oversampling_b * static_cast<double>(space.n)));
}

void PipelineConfig::validate() const {
  if (space.n < 1) throw InvalidInput("config: space.n must be >= 1");
  if (space.family == BasisFamily::CustomTable && space.table.rows() != space.n)
    throw InvalidInput("config: custom table must have n rows");
  if (design.epsilon && !(*design.epsilon > 0.0))
    throw InvalidInput("config: design.epsilon must be positive");
  if (design.max_iters < 1) throw InvalidInput("config: design.max_iters must be >= 1");
  const double b_floor = 1.0 + 1.0 / static_cast<double>(space.n);
  if (!(subsample.oversampling_b > b_floor)) {
    std::ostringstream msg;
    msg << "config: subsample.b = " << subsample.oversampling_b << " must exceed 1 + 1/n = "
        << b_floor;
    throw InvalidInput(msg.str());
  }
  if (subsample.max_retries < 0) throw InvalidInput("config: subsample.max_retries must be >= 0");
  for (double p : metrics.p_values)
    if (!(p >= 1.0)) throw InvalidInput("config: metrics.p_values entries must lie in [1, inf]");
  if (metrics.test_functions.empty())
    throw InvalidInput("config: metrics.test_functions must be nonempty");
  if (output_dir.empty()) throw InvalidInput("config: output directory must be nonempty");
}

namespace {

[[noreturn]] void fail_field(const std::string& field, const std::string& why) {
  throw InvalidInput("config field '" + field + "': " + why);
}

Eigen::VectorXd to_vector(const json& arr, const std::string& field) {
  if (!arr.is_array()) fail_field(field, "expected an array of numbers");
  Eigen::VectorXd v(arr.size());
  Eigen::Index i = 0;
  for (const auto& entry : arr) {
    if (!entry.is_number()) fail_field(field, "expected an array of numbers");
    v(i++) = entry.get<double>();
  }
  return v;
}

Eigen::MatrixXd load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open table csv '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw InvalidInput("config: ragged rows in table csv '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("config: empty table csv '" + path + "'");
  Eigen::MatrixXd table(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

DomainSpec parse_domain(const json& j) {
  if (!j.is_object() || !j.contains("type")) fail_field("space.domain", "missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "interval") {
    IntervalDomain d;
    d.lo = j.at("lo").get<double>();
    d.hi = j.at("hi").get<double>();
    d.size = j.at("size").get<Eigen::Index>();
    return d;
  }
  if (type == "torus") {
    TorusDomain d;
    d.size = j.at("size").get<Eigen::Index>();
    return d;
  }
  if (type == "explicit") {
    ExplicitDomain d;
    const Eigen::VectorXd pts = to_vector(j.at("points"), "space.domain.points");
    d.points = pts;
    return d;
  }
  fail_field("space.domain.type", "unknown domain type '" + type + "'");
}

double parse_p(const json& entry) {
  if (entry.is_string()) {
    const std::string s = entry.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity")
      return std::numeric_limits<double>::infinity();
    fail_field("metrics.p_values", "unknown value '" + s + "'");
  }
  if (!entry.is_number()) fail_field("metrics.p_values", "expected a number or \"inf\"");
  return entry.get<double>();
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config: JSON parse error: ") + e.what());
  }

  PipelineConfig cfg;
  if (!j.contains("space")) fail_field("space", "missing");
  const json& sp = j.at("space");
  const std::string family = sp.value("family", "");
  if (family == "algebraic")
    cfg.space.family = BasisFamily::AlgebraicPolynomial;
  else if (family == "trigonometric")
    cfg.space.family = BasisFamily::TrigonometricPolynomial;
  else if (family == "custom")
    cfg.space.family = BasisFamily::CustomTable;
  else
    fail_field("space.family", "unknown basis family '" + family + "'");
  if (!sp.contains("n")) fail_field("space.n", "missing");
  cfg.space.n = sp.at("n").get<Eigen::Index>();
  if (!sp.contains("domain")) fail_field("space.domain", "missing");
  cfg.space.domain = parse_domain(sp.at("domain"));
  if (cfg.space.family == BasisFamily::CustomTable) {
    if (sp.contains("table")) {
      const json& rows = sp.at("table");
      if (!rows.is_array() || rows.empty()) fail_field("space.table", "expected array of rows");
      Eigen::MatrixXd table(rows.size(), rows.front().size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Eigen::VectorXd row = to_vector(rows.at(i), "space.table");
        if (row.size() != table.cols()) fail_field("space.table", "ragged rows");
        table.row(static_cast<Eigen::Index>(i)) = row;
      }
      cfg.space.table = table;
    } else if (sp.contains("table_csv")) {
      cfg.space.table = load_table_csv(sp.at("table_csv").get<std::string>());
    } else {
      fail_field("space.table", "custom family needs 'table' or 'table_csv'");
    }
  }
  if (sp.contains("ground_weights"))
    cfg.space.ground_weights = to_vector(sp.at("ground_weights"), "space.ground_weights");

  if (j.contains("design")) {
    const json& de = j.at("design");
    if (de.contains("epsilon")) cfg.design.epsilon = de.at("epsilon").get<double>();
    if (de.contains("max_iters")) cfg.design.max_iters = de.at("max_iters").get<long>();
  }

  if (!j.contains("subsample") || !j.at("subsample").contains("seed"))
    fail_field("subsample.seed", "missing (seeds are mandatory, no wall-clock defaults)");
  const json& su = j.at("subsample");
  cfg.subsample.seed = su.at("seed").get<std::uint64_t>();
  if (su.contains("b")) cfg.subsample.oversampling_b = su.at("b").get<double>();
  if (su.contains("max_retries")) cfg.subsample.max_retries = su.at("max_retries").get<int>();

  if (j.contains("metrics")) {
    const json& me = j.at("metrics");
    if (me.contains("p_values"))
      for (const auto& entry : me.at("p_values")) cfg.metrics.p_values.push_back(parse_p(entry));
    if (me.contains("test_functions")) {
      for (const auto& entry : me.at("test_functions")) {
        TestFunctionSpec tf;
        if (entry.is_string()) {
          tf.name = entry.get<std::string>();
        } else if (entry.is_object()) {
          tf.name = entry.at("name").get<std::string>();
          if (entry.contains("values"))
            tf.values = to_vector(entry.at("values"), "metrics.test_functions.values");
          else if (entry.contains("csv"))
            tf.values = load_table_csv(entry.at("csv").get<std::string>()).row(0).transpose();
          else
            fail_field("metrics.test_functions", "object entries need 'values' or 'csv'");
        } else {
          fail_field("metrics.test_functions", "expected string or object entries");
        }
        cfg.metrics.test_functions.push_back(std::move(tf));
      }
    }
  }
  if (cfg.metrics.p_values.empty())
    cfg.metrics.p_values = {2.0, 4.0, std::numeric_limits<double>::infinity()};
  if (cfg.metrics.test_functions.empty())
    for (const std::string& name : test_function_names())
      cfg.metrics.test_functions.push_back({name, std::nullopt});

  cfg.oracle_check = j.value("oracle_check", false);
  cfg.output_dir = j.value("output", std::string("out"));

  cfg.validate();
  return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace sampro
