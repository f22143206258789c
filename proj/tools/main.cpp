#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sampro/config.hpp"
#include "sampro/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_override;
  std::uint64_t seed_override = 0;
  bool oracle_check = false;
};

void add_common(CLI::App* sub, CommonArgs* args) {
  sub->add_option("--config", args->config_path, "Path to the pipeline config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--output", args->output_override, "Output directory (overrides config)");
  sub->add_option("--seed", args->seed_override, "Base seed (overrides config)");
}

int dispatch(const std::string& command, const CommonArgs& args, bool seed_given) {
  sampro::PipelineConfig config = sampro::load_config_file(args.config_path);
  if (!args.output_override.empty()) config.output_dir = args.output_override;
  if (seed_given) config.subsample.seed = args.seed_override;
  if (args.oracle_check) config.oracle_check = true;
  config.validate();

  if (command == "design") return sampro::run_design_stage(config, config.output_dir);
  if (command == "subsample") return sampro::run_subsample_stage(config, config.output_dir);
  if (command == "project") return sampro::run_project_stage(config, config.output_dir);
  if (command == "verify") return sampro::run_verify(config, config.output_dir);
  if (command == "oracle-check") return sampro::run_oracle_stage(config, config.output_dir);
  std::cerr << "error: unknown command " << command << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-optimal sampling sets and projections for finite function spaces"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* design = app.add_subcommand("design", "Optimize a design measure and reduce it");
  CLI::App* subsample =
      app.add_subcommand("subsample", "Draw and trim sampling sets from a stored design");
  CLI::App* project =
      app.add_subcommand("project", "Build the least-squares projection for stored samples");
  CLI::App* verify =
      app.add_subcommand("verify", "Run the full pipeline and check every certified bound");
  CLI::App* oracle =
      app.add_subcommand("oracle-check", "Compare the solvers against exhaustive search");
  for (CLI::App* sub : {design, subsample, project, verify, oracle}) add_common(sub, &args);
  verify->add_flag("--oracle-check", args.oracle_check,
                   "Also run the exhaustive cross-check and embed it in the report");

  CLI11_PARSE(app, argc, argv);

  CLI::App* active = app.get_subcommands().front();
  try {
    return dispatch(active->get_name(), args, active->count("--seed") > 0);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
