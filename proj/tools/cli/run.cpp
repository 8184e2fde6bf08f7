#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ghost/analysis.hpp"
#include "ghost/errors.hpp"
#include "ghost/gaussian.hpp"
#include "ghost/oracle.hpp"
#include "svg.hpp"

namespace ghost::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kMapSamples = 256;

const char* detector_name(Detector d) { return d == Detector::d1 ? "D1" : "D2"; }
Detector other(Detector d) { return d == Detector::d1 ? Detector::d2 : Detector::d1; }

struct Context {
  const RunManifest& manifest;
  const ExperimentConfig& cfg;
  std::ostringstream report;
  std::vector<std::string> warnings;
  const char* stage = "config";

  Context(const RunManifest& m, const ExperimentConfig& c) : manifest(m), cfg(c) { report << std::setprecision(10); }

  template <class T>
  void kv(std::string_view key, const T& value) {
    report << key << ": " << value << '\n';
  }
  void kv_complex(std::string_view key, cplx v) {
    report << key << ": " << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i\n";
  }
  void warn(std::optional<std::string> w) {
    if (w) warnings.push_back(std::move(*w));
  }
  fs::path out(const std::string& name) const { return manifest.out_dir / name; }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text)) throw Error("cannot write " + path.string());
}

std::string profile_csv(const std::vector<double>& z, const std::vector<double>& density) {
  std::ostringstream os;
  os << std::setprecision(12) << "z_m,density_per_m\n";
  for (std::size_t i = 0; i < z.size(); ++i) os << z[i] << ',' << density[i] << '\n';
  return os.str();
}

TwoPhotonState scenario_state(const ExperimentConfig& cfg) {
  return cfg.lens_focal ? apply_lens_scenario(cfg) : detector_state(cfg);
}

bool same_color(const ExperimentConfig& cfg) { return cfg.lambda1 == cfg.lambda2; }

Scenario scan_prediction(const ExperimentConfig& cfg) {
  if (cfg.scan.detector == Detector::d1) return Scenario::scan_d1;
  if (cfg.lens_focal) return Scenario::lens;
  return same_color(cfg) ? Scenario::same_color : Scenario::two_color;
}

const char* scenario_label(Scenario s) {
  switch (s) {
    case Scenario::same_color: return "same_color";
    case Scenario::two_color: return "two_color";
    case Scenario::lens: return "lens";
    case Scenario::scan_d1: return "scan_d1";
  }
  return "?";
}

void predict(Context& ctx) {
  const auto& cfg = ctx.cfg;
  ctx.stage = "closed-form";
  const Uncertainty unc = uncertainties(cfg);
  const SlitParams full = conditional_slit_params(cfg);
  const SlitParams approx = conditional_slit_params(cfg, SlitModel::good_correlation);

  ctx.kv("scenario", "predict");
  ctx.kv("gamma_m", std::sqrt(cfg.gamma_sq()));
  ctx.kv("alpha", cfg.alpha());
  ctx.kv("D_m", cfg.total_d());
  ctx.kv("delta_z_m", unc.delta_z);
  ctx.kv("delta_k_per_m", unc.delta_k);
  ctx.kv("z0_m", cfg.z0());
  ctx.kv("z0_prime_m", full.z0_prime);
  ctx.kv("z0_prime_good_correlation_m", approx.z0_prime);
  ctx.kv_complex("Gamma_m2", full.gamma_cap);
  ctx.kv_complex("Gamma_good_correlation_m2", approx.gamma_cap);
  ctx.kv("theta1_per_m", theta1(cfg));
  ctx.kv("theta2_per_m", theta2(cfg));
  ctx.kv(same_color(cfg) ? "theta_D_per_m" : "theta_L_per_m", theta2(cfg));

  std::vector<Scenario> scenarios;
  if (same_color(cfg)) scenarios.push_back(Scenario::same_color);
  scenarios.push_back(Scenario::two_color);
  scenarios.push_back(Scenario::scan_d1);
  if (cfg.lens_focal) scenarios.push_back(Scenario::lens);
  for (Scenario s : scenarios) {
    const double w = analytic_fringe_width(cfg, s);
    const std::string key = std::string("fringe_width_") + scenario_label(s);
    ctx.kv(key + "_m", w);
    ctx.kv(key + "_mm", w * 1e3);
    ctx.warn(fringe_regime_warning(cfg, s));
  }
  write_text(ctx.out("predict_report.txt"), ctx.report.str());
}

void scan(Context& ctx) {
  const auto& cfg = ctx.cfg;
  ctx.stage = "closed-form";
  const TwoPhotonState state = scenario_state(cfg);
  const Detector scanning = cfg.scan.detector;
  const Detector fixed = other(scanning);
  const std::vector<double> zs = linspace(cfg.scan.z_min, cfg.scan.z_max, cfg.scan.samples);

  // Density of the scanning photon conditioned on the fixed detector firing.
  const double at_fixed = marginal_density(state, fixed, cfg.fixed_pos);
  if (!(at_fixed > 0.0)) throw DomainError("the fixed detector sits where its photon never arrives");
  std::vector<double> density = coincidence_profile(state, scanning, cfg.fixed_pos, zs);
  for (double& v : density) v /= at_fixed;

  ctx.stage = "output";
  write_text(ctx.out("scan_profile.csv"), profile_csv(zs, density));

  ctx.stage = "analysis";
  const Scenario prediction = scan_prediction(cfg);
  const double predicted = analytic_fringe_width(cfg, prediction);
  ctx.warn(fringe_regime_warning(cfg, prediction));
  FringeOptions opts;
  opts.expected_period = predicted;
  const auto rep = extract_fringe_width(Profile1D{zs, density}, opts);

  ctx.kv("scenario", "scan");
  ctx.kv("scanning_detector", detector_name(scanning));
  ctx.kv("fixed_detector", detector_name(fixed));
  ctx.kv("fixed_position_m", cfg.fixed_pos);
  ctx.kv("lens", cfg.lens_focal ? "true" : "false");
  ctx.kv("samples", zs.size());
  ctx.kv("prediction", scenario_label(prediction));
  ctx.kv("fringe_width_predicted_m", predicted);
  if (rep) {
    ctx.kv("fringe_width_m", rep->fringe_width);
    ctx.kv("fringe_width_mm", rep->fringe_width * 1e3);
    ctx.kv("relative_deviation", rep->fringe_width / predicted - 1.0);
    ctx.kv("visibility", rep->visibility);
    ctx.kv("envelope_width_m", rep->envelope_width);
    ctx.kv("n_fringes_resolved", rep->n_fringes_resolved);
  } else {
    ctx.kv("fringe_width_m", "no fringes");
  }

  ctx.stage = "output";
  write_text(ctx.out("scan_report.txt"), ctx.report.str());
  if (ctx.manifest.emit_svg)
    write_line_svg(ctx.out("scan_profile.svg"),
                   std::string("Coincidence scan, ") + detector_name(scanning) + " moving", "density (1/m)",
                   {{detector_name(scanning), zs, density}});
}

void map(Context& ctx) {
  const auto& cfg = ctx.cfg;
  ctx.stage = "closed-form";
  const TwoPhotonState state = scenario_state(cfg);
  const int n = std::min(cfg.scan.samples, kMapSamples);
  const std::vector<double> zs = linspace(cfg.scan.z_min, cfg.scan.z_max, n);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  std::ostringstream csv;
  csv << std::setprecision(12) << "z1_m,z2_m,density_per_m2\n";
  for (double z1 : zs)
    for (double z2 : zs) {
      values.push_back(coincidence_density(state, z1, z2));
      csv << z1 << ',' << z2 << ',' << values.back() << '\n';
    }

  ctx.stage = "output";
  write_text(ctx.out("map_density.csv"), csv.str());
  const auto peak = std::max_element(values.begin(), values.end());
  const auto ipk = static_cast<std::size_t>(peak - values.begin());
  ctx.kv("scenario", "map");
  ctx.kv("lens", cfg.lens_focal ? "true" : "false");
  ctx.kv("samples_per_axis", n);
  ctx.kv("z_min_m", cfg.scan.z_min);
  ctx.kv("z_max_m", cfg.scan.z_max);
  ctx.kv("peak_density_per_m2", *peak);
  ctx.kv("peak_z1_m", zs[ipk / static_cast<std::size_t>(n)]);
  ctx.kv("peak_z2_m", zs[ipk % static_cast<std::size_t>(n)]);
  write_text(ctx.out("map_report.txt"), ctx.report.str());
  if (ctx.manifest.emit_svg)
    write_map_svg(ctx.out("map_density.svg"), "Coincidence density P(z1, z2)", cfg.scan.z_min, cfg.scan.z_max, n, n,
                  values);
}

void marginal(Context& ctx) {
  const auto& cfg = ctx.cfg;
  ctx.stage = "closed-form";
  const TwoPhotonState state = scenario_state(cfg);
  const std::vector<double> zs = linspace(cfg.scan.z_min, cfg.scan.z_max, cfg.scan.samples);
  const double e2 = cfg.epsilon * cfg.epsilon;
  const double slit_overlap =
      std::abs(mode_overlap(normalized_mode(cfg.z0(), e2), normalized_mode(-cfg.z0(), e2)));

  ctx.kv("scenario", "marginal");
  ctx.kv("lens", cfg.lens_focal ? "true" : "false");
  ctx.kv("slit_mode_overlap", slit_overlap);
  std::vector<Series> series;
  for (Detector d : {Detector::d1, Detector::d2}) {
    const std::vector<double> m = marginal_profile(state, d, zs);
    const std::string tag = d == Detector::d1 ? "d1" : "d2";
    ctx.stage = "output";
    write_text(ctx.out("marginal_" + tag + ".csv"), profile_csv(zs, m));

    ctx.stage = "analysis";
    const Profile1D p{zs, m};
    ctx.kv("visibility_" + tag, visibility(p, cfg.scan.z_max - cfg.scan.z_min));
    ctx.kv("cross_term_ratio_" + tag, marginal_cross_visibility(state, d, zs));
    std::string fringes = "none";
    try {
      if (const auto rep = extract_fringe_width(p)) {
        std::ostringstream w;
        w << std::setprecision(10) << rep->fringe_width;
        fringes = w.str();
      }
    } catch (const AnalysisError& e) {
      fringes = std::string("none (") + e.what() + ")";
    }
    ctx.kv("fringe_width_" + tag + "_m", fringes);
    series.push_back({"photon " + tag.substr(1), zs, m});
  }

  ctx.stage = "output";
  write_text(ctx.out("marginal_report.txt"), ctx.report.str());
  if (ctx.manifest.emit_svg) write_line_svg(ctx.out("marginal.svg"), "Single-photon marginals", "density (1/m)", series);
}

void validate(Context& ctx) {
  ctx.stage = "grid oracle";
  if (ctx.cfg.lens_focal) ctx.warnings.push_back("the oracle comparison covers the no-lens pipeline; f_m is ignored");
  const ComparisonReport rep = compare_oracle(ctx.cfg, ctx.manifest.scaled);
  if (rep.scaled)
    for (auto& w : regime_warnings(rep.cfg)) ctx.warnings.push_back("simulated geometry: " + w);

  ctx.stage = "output";
  std::ostringstream report;
  report << "scenario: validate\n";
  write_report(report, rep);
  ctx.report << report.str();
  write_text(ctx.out("validate_report.txt"), ctx.report.str());
  std::ostringstream csv;
  write_profiles_csv(csv, rep);
  write_text(ctx.out("validate_profiles.csv"), csv.str());
  if (ctx.manifest.emit_svg)
    write_line_svg(ctx.out("validate_profiles.svg"), "Coincidence P(0, z2): closed form vs grid", "density (1/m^2)",
                   {{"closed form", rep.closed_form.positions, rep.closed_form.values},
                    {"grid oracle", rep.oracle.positions, rep.oracle.values}});
}

}  // namespace

std::optional<ScenarioKind> parse_scenario(std::string_view name) {
  for (ScenarioKind k : {ScenarioKind::predict, ScenarioKind::scan, ScenarioKind::map, ScenarioKind::marginal,
                         ScenarioKind::validate})
    if (scenario_name(k) == name) return k;
  return std::nullopt;
}

std::string_view scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::predict: return "predict";
    case ScenarioKind::scan: return "scan";
    case ScenarioKind::map: return "map";
    case ScenarioKind::marginal: return "marginal";
    case ScenarioKind::validate: return "validate";
  }
  return "?";
}

int run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(manifest.config_path);
  } catch (const ConfigError& e) {
    err << "error [config]: " << e.what() << '\n';
    return kConfig;
  }
  try {
    fs::create_directories(manifest.out_dir);
  } catch (const fs::filesystem_error& e) {
    err << "error [output]: cannot create " << manifest.out_dir.string() << ": " << e.code().message() << '\n';
    return kConfig;
  }
  if (manifest.scaled && manifest.scenario != ScenarioKind::validate)
    err << "note: --scaled only affects the validate scenario\n";

  Context ctx(manifest, cfg);
  for (auto& w : regime_warnings(cfg)) ctx.warnings.push_back(std::move(w));
  try {
    switch (manifest.scenario) {
      case ScenarioKind::predict: predict(ctx); break;
      case ScenarioKind::scan: scan(ctx); break;
      case ScenarioKind::map: map(ctx); break;
      case ScenarioKind::marginal: marginal(ctx); break;
      case ScenarioKind::validate: validate(ctx); break;
    }
  } catch (const ConfigError& e) {
    err << "error [config]: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error [" << ctx.stage << "]: " << e.what() << '\n';
    return kRegime;
  }

  out << ctx.report.str();
  for (const auto& w : ctx.warnings) err << "warning: " << w << '\n';
  if (manifest.strict && !ctx.warnings.empty()) {
    err << "error [regime]: " << ctx.warnings.size() << " regime warning(s) with --strict\n";
    return kRegime;
  }
  return kOk;
}

}  // namespace ghost::cli
