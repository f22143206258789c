#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sampro/space.hpp"

namespace sampro {

struct SpaceConfig {
  BasisFamily family = BasisFamily::AlgebraicPolynomial;
  Eigen::Index n = 1;
  DomainSpec domain = IntervalDomain{-1.0, 1.0, 33};
  Eigen::MatrixXd table;  // custom family only, n x M
  std::optional<Eigen::VectorXd> ground_weights;
};

struct DesignConfig {
  std::optional<double> epsilon;  // default 0.01 * n
  long max_iters = 100000;
};

struct SubsampleConfig {
  double oversampling_b = 2.0;
  std::uint64_t seed = 0;
  int max_retries = 8;
};

// A test function is either a registry name or an explicit value table.
struct TestFunctionSpec {
  std::string name;
  std::optional<Eigen::VectorXd> values;
};

struct MetricsConfig {
  std::vector<double> p_values;  // infinity allowed
  std::vector<TestFunctionSpec> test_functions;
};

struct PipelineConfig {
  SpaceConfig space;
  DesignConfig design;
  SubsampleConfig subsample;
  MetricsConfig metrics;
  bool oracle_check = false;
  std::string output_dir = "out";

  double epsilon() const;
  Eigen::Index subsample_target() const;
  void validate() const;
};

PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config_file(const std::string& path);

}  // namespace sampro
