#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "curlcurl/config.hpp"
#include "curlcurl/errors.hpp"
#include "curlcurl/runner.hpp"

namespace {

int run_subcommand(const std::string& kind_name, const std::string& config_path,
                   const std::string& output_override, int threads_override) {
  using namespace curlcurl;
  RunConfig cfg = parse_config_file(config_path);
  const ExperimentKind kind = experiment_from_string(kind_name);
  if (cfg.kind_explicit && cfg.kind != kind)
    throw ConfigError("config kind '" + to_string(cfg.kind) + "' conflicts with subcommand '" +
                      kind_name + "'");
  cfg.kind = kind;
  if (!output_override.empty()) cfg.output_dir = output_override;
  if (threads_override > 0) cfg.threads = threads_override;
  return run_experiment(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nehari-manifold ground states of the singular-potential NLS "
               "and ansatz solutions of the curl-curl problem"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {"solve",   "limit",      "sweep",
                                          "decay",   "compare",    "continuity",
                                          "reconstruct", "cutoff"};
  std::string config_path, output_dir;
  int threads = 0;
  for (const std::string& kind : kinds) {
    auto* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--output", output_dir, "output directory override");
    sub->add_option("--threads", threads, "worker count for independent solves");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    return run_subcommand(kind, config_path, output_dir, threads);
  } catch (const curlcurl::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return curlcurl::kExitConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return curlcurl::kExitConfigError;
  }
}
