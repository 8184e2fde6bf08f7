#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "ghost/errors.hpp"

namespace ghost::cli {

namespace {

using nlohmann::json;

double number(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(key, "missing required key");
  if (!it->is_number()) throw ConfigError(key, "must be a number");
  return it->get<double>();
}

std::optional<double> optional_number(const json& obj, const std::string& key) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key);
}

Detector detector(const json& value) {
  if (value.is_number_integer()) {
    const auto v = value.get<long>();
    if (v == 1) return Detector::d1;
    if (v == 2) return Detector::d2;
  } else if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "D1" || s == "d1" || s == "1") return Detector::d1;
    if (s == "D2" || s == "d2" || s == "2") return Detector::d2;
  }
  throw ConfigError("scan_detector", "must be \"D1\" or \"D2\"");
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ConfigError("", "config must be a JSON object");

  static const std::set<std::string> known = {
      "lambda1_nm", "lambda2_nm", "sigma_inv_um", "omega_mm",    "epsilon_mm",   "d_mm",     "L1_m", "L2_m",
      "f_m",        "scan_detector", "scan_min_mm", "scan_max_mm", "scan_samples", "fixed_mm"};
  for (const auto& [key, value] : obj.items())
    if (!known.contains(key) && !key.starts_with('_')) throw ConfigError(key, "unknown key");

  ExperimentConfig cfg;
  cfg.lambda1 = number(obj, "lambda1_nm") * 1e-9;
  cfg.lambda2 = number(obj, "lambda2_nm") * 1e-9;
  cfg.sigma = 1.0 / (number(obj, "sigma_inv_um") * 1e-6);
  cfg.omega_cap = number(obj, "omega_mm") * 1e-3;
  cfg.epsilon = number(obj, "epsilon_mm") * 1e-3;
  cfg.slit_sep = number(obj, "d_mm") * 1e-3;
  cfg.l1 = number(obj, "L1_m");
  cfg.l2 = number(obj, "L2_m");
  if (const auto f = optional_number(obj, "f_m")) cfg.lens_focal = *f;

  if (obj.contains("scan_detector")) cfg.scan.detector = detector(obj["scan_detector"]);
  if (const auto v = optional_number(obj, "scan_min_mm")) cfg.scan.z_min = *v * 1e-3;
  if (const auto v = optional_number(obj, "scan_max_mm")) cfg.scan.z_max = *v * 1e-3;
  if (obj.contains("scan_samples")) {
    if (!obj["scan_samples"].is_number_integer()) throw ConfigError("scan_samples", "must be an integer");
    cfg.scan.samples = obj["scan_samples"].get<int>();
  }
  if (const auto v = optional_number(obj, "fixed_mm")) cfg.fixed_pos = *v * 1e-3;

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace ghost::cli
