#pragma once

#include <optional>
#include <string>

#include "sampro/config.hpp"
#include "sampro/metrics.hpp"

namespace sampro {

struct OracleCheckReport {
  double optimized_det = 0.0;
  double brute_det = 0.0;
  double det_rel_gap = 0.0;
  std::int64_t design_nodes = 0;

  double greedy_constant = 0.0;
  double brute_constant = 0.0;
  double quality_ratio = 0.0;
  std::int64_t subsample_nodes = 0;

  std::optional<double> lm_error;     // n <= 2 only
  std::optional<double> brute_error;
  std::optional<double> cheb_gap;
  std::int64_t cheb_nodes = 0;
};

// Cross-checks the iterative solvers against the exhaustive oracles; the
// instance must satisfy the oracle preconditions (<= 8 candidates, n <= 3).
OracleCheckReport run_oracle_check(const PipelineConfig& config);

// Pipeline stages used by the CLI subcommands. Artifacts land in output_dir.
int run_verify(const PipelineConfig& config, const std::string& output_dir);
int run_design_stage(const PipelineConfig& config, const std::string& output_dir);
int run_subsample_stage(const PipelineConfig& config, const std::string& output_dir);
int run_project_stage(const PipelineConfig& config, const std::string& output_dir);
int run_oracle_stage(const PipelineConfig& config, const std::string& output_dir);

}  // namespace sampro
