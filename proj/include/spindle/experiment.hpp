#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace spindle {

inline constexpr const char* kVersion = "0.1.0";

/// Flat key-value configuration with section headers; keys are stored as
/// "section.key". The [experiment] section carries the command name and seed.
struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  bool svg = false;
  std::string out_dir = ".";
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name);
ExperimentConfig parse_config_file(const std::string& path);

/// Executes one of {reconstruct, dowker, quadrangle, derivative-check,
/// pm-distance, refinement-demo, counterexample}. Writes <command>.csv and
/// <command>.json (plus <command>.svg when requested) into config.out_dir.
/// Identical config and seed produce byte-identical CSV/JSON. Module errors
/// are recorded in the JSON error field and yield a nonzero status.
int run_experiment(const ExperimentConfig& config);

}  // namespace spindle
