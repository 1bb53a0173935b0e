#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spindle/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"C-spindle convexity experiment runner"};
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool svg = false;
  app.add_option("--config", config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default: config value)");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--svg", svg, "render SVG figures");
  CLI11_PARSE(app, argc, argv);

  try {
    spindle::ExperimentConfig cfg = spindle::parse_config_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (svg) cfg.svg = true;
    return spindle::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
