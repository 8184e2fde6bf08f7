#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace ghost::cli;
  CLI::App app{"Two-photon ghost interference simulator"};
  std::string scenario, config, out_dir = ".";
  RunManifest manifest;
  app.add_option("scenario", scenario, "predict | scan | map | marginal | validate")
      ->required()
      ->check(CLI::IsMember({"predict", "scan", "map", "marginal", "validate"}));
  app.add_option("config", config, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--svg", manifest.emit_svg, "also write SVG plots");
  app.add_flag("--scaled", manifest.scaled, "validate on the desk-scale geometry");
  app.add_flag("--strict", manifest.strict, "exit 1 on physics-regime warnings");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  manifest.scenario = *parse_scenario(scenario);
  manifest.config_path = config;
  manifest.out_dir = out_dir;
  return run(manifest, std::cout, std::cerr);
}
