#include <omp.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "riceband/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Expected zero-set area of Gaussian random fields"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv";
  long long seed_override = -1;
  int threads = 0;

  for (const char* name : {"expected-area", "mc-verify", "coarea-check", "kac-asymptotic",
                           "favard-measure", "identities"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker thread cap");
    sub->add_option("--seed", seed_override, "overrides the config seed");
  }

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) omp_set_num_threads(threads);

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file " << config_path << "\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();

  riceband::cli::RunResult result;
  try {
    riceband::cli::ExperimentConfig config = riceband::cli::parse_config(text.str());
    const std::string command = app.get_subcommands().front()->get_name();
    if (command != riceband::cli::command_name(config.command)) {
      std::cerr << "error: config.command is \"" << riceband::cli::command_name(config.command)
                << "\" but the CLI command is \"" << command << "\"\n";
      return 2;
    }
    if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
    const auto fmt = format == "json" ? riceband::cli::OutputFormat::Json
                                      : riceband::cli::OutputFormat::Csv;
    result = riceband::cli::run(config, fmt);
  } catch (const riceband::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (out_path.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    out << result.output;
  }
  return result.exit_code;
}
