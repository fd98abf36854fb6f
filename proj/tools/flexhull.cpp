// flexhull fit|aggregate|oracle|emit-plots --config <path> [--jobs N] [--seed S] [--out DIR]
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "flexhull/flexhull.h"

int main(int argc, char** argv) {
  CLI::App app{"Homothetic polygon approximations of DER flexibility domains"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::size_t der = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Fleet configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--jobs", jobs, "Parallel DER fits")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Overrides fit.seed");
    sub->add_option("--out", out, "Output directory (default: config \"outputs\")");
  };
  auto* fit = app.add_subcommand("fit", "Fit one DER");
  common(fit);
  fit->add_option("--der", der, "Index of the DER to fit");
  common(app.add_subcommand("aggregate", "Fit every DER, aggregate, score, write reports and plots"));
  common(app.add_subcommand("oracle", "Compare fits against the geometric oracle"));
  common(app.add_subcommand("emit-plots", "Write plot CSVs only"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the config-error exit code
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  fh_run_options opts{};
  opts.command = command.c_str();
  opts.config_path = config.c_str();
  opts.out_dir = out.empty() ? nullptr : out.c_str();
  opts.jobs = jobs;
  opts.has_seed = seed ? 1 : 0;
  opts.seed = seed.value_or(0);
  opts.der_index = der;
  const int code = fh_run(&opts);
  if (code != 0 && *fh_last_error()) std::cerr << "error: " << fh_last_error() << "\n";
  return code;
}
