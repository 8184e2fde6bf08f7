#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "ghost/config.hpp"

namespace ghost::cli {

enum class ScenarioKind { predict, scan, map, marginal, validate };

std::optional<ScenarioKind> parse_scenario(std::string_view name);
std::string_view scenario_name(ScenarioKind kind);

struct RunManifest {
  std::filesystem::path config_path;
  ScenarioKind scenario = ScenarioKind::predict;
  std::filesystem::path out_dir = ".";
  bool emit_svg = false;
  bool scaled = false;  ///< validate only
  bool strict = false;  ///< regime warnings become exit code 1
};

enum ExitCode : int { kOk = 0, kRegime = 1, kConfig = 2 };

/// Parses a flat JSON object in config-file units (nm, um, mm, m) into SI.
/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs one scenario, writes its artifacts into `out_dir` and echoes the report
/// to `out`. Errors go to `err` prefixed with the failing stage.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

}  // namespace ghost::cli
