#include "commands.hpp"

#include "ewr/errors.hpp"
#include "ewr/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace ewr;
using namespace ewr::app;

int main(int argc, char** argv) {
  CLI::App app{"Focal-series exit-wave simulation and reconstruction"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  std::optional<unsigned> threads;
  bool deterministic = false;
  app.add_option("-c,--config", config_path, "Config file (key = value with [section] headers)");
  app.add_option("--set", overrides, "Override a config key, e.g. --set solver.alpha=1e-4")->take_all();
  app.add_option("-o,--output", output, "Output directory (run.output_dir)");
  app.add_option("--threads", threads, "Worker thread cap, 0 for all cores");
  app.add_flag("--deterministic", deterministic, "Zero timestamps so outputs are byte-identical");

  auto* simulate = app.add_subcommand("simulate", "Simulate a focal series with ground truth");

  auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct wave and translations from a series");
  std::string series_dir;
  bool freeze = false;
  std::optional<double> alpha;
  reconstruct->add_option("series", series_dir, "Series directory")->required();
  reconstruct->add_flag("--freeze-translations", freeze, "Keep the initial translations fixed");
  reconstruct->add_option("--alpha", alpha, "Regularization weight (solver.alpha)");

  auto* probe = app.add_subcommand("probe", "Run a diagnostic probe");
  std::string probe_name;
  std::string probe_series;
  probe->add_option("name", probe_name, "convexity | invariance | coercivity | factorization")
      ->required()
      ->check(CLI::IsMember({"convexity", "invariance", "coercivity", "factorization"}));
  probe->add_option("--series", probe_series, "Series directory (default: simulate from the config)");

  auto* info = app.add_subcommand("info", "Print a series manifest or field header");
  std::string info_path;
  info->add_option("path", info_path, "Series directory or field stem")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*info) return cmd_info(info_path, std::cout);

    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (!output.empty()) cfg.output_dir = output;
    if (threads) cfg.threads = *threads;
    if (deterministic) cfg.deterministic = true;
    if (freeze) cfg.solver.freeze_translations = true;
    if (alpha) cfg.solver.alpha = *alpha;
    cfg.validate();
    set_thread_limit(cfg.threads);

    if (*simulate) return cmd_simulate(cfg, std::cout);
    if (*reconstruct) return cmd_reconstruct(cfg, series_dir, std::cout);
    std::optional<std::filesystem::path> dir;
    if (!probe_series.empty()) dir = probe_series;
    return cmd_probe(probe_name, cfg, dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
