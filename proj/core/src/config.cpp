#include "ghost/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ghost/errors.hpp"

namespace ghost {

namespace {

void require_positive(double value, const char* key) {
  if (!(std::isfinite(value) && value > 0.0))
    throw ConfigError(key, "must be a finite, strictly positive length");
}

}  // namespace

void ExperimentConfig::validate() const {
  require_positive(lambda1, "lambda1_nm");
  require_positive(lambda2, "lambda2_nm");
  require_positive(sigma, "sigma_inv_um");
  require_positive(omega_cap, "omega_mm");
  require_positive(epsilon, "epsilon_mm");
  require_positive(slit_sep, "d_mm");
  require_positive(l1, "L1_m");
  require_positive(l2, "L2_m");

  const double corr = 4.0 * omega_cap * omega_cap * sigma * sigma;
  if (std::abs(corr - 1.0) < 1e-9)
    throw ConfigError("omega_mm", "4 Omega^2 sigma^2 = 1 makes the entangled state singular");

  if (scan.samples < 2) throw ConfigError("scan_samples", "need at least 2 samples");
  if (!(scan.z_max > scan.z_min)) throw ConfigError("scan_max_mm", "scan range is empty");
  if (!std::isfinite(fixed_pos)) throw ConfigError("fixed_mm", "must be finite");

  if (lens_focal) {
    const double f = *lens_focal;
    require_positive(f, "f_m");
    const double apparent = alpha() * l2 + l1;
    if (std::abs(apparent - 2.0 * f) <= 1e-12 * apparent)
      throw ConfigError("f_m", "lens sits one focal length from the apparent waist (alpha L2 + L1 = 2f)");
    if (!(l1 > f)) throw ConfigError("f_m", "lens must sit after the slit plane (L1 > f)");
  }
}

ExperimentConfig reference_config() {
  ExperimentConfig cfg;
  cfg.lambda1 = 1530e-9;
  cfg.lambda2 = 780e-9;
  cfg.epsilon = 0.1e-3;
  const double gamma = 0.11e-3;
  cfg.sigma = 1.0 / std::sqrt(gamma * gamma - cfg.epsilon * cfg.epsilon);
  cfg.omega_cap = 10e-3;
  cfg.slit_sep = 0.5e-3;
  cfg.l1 = 1.15;
  cfg.l2 = 0.325;
  return cfg;
}

std::vector<std::string> regime_warnings(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  const double widest = std::max(cfg.epsilon, 1.0 / cfg.sigma);
  if (cfg.omega_cap < 100.0 * widest) {
    std::ostringstream os;
    os << "weak position correlation: Omega = " << cfg.omega_cap << " m < 100 max(epsilon, 1/sigma) = "
       << 100.0 * widest << " m";
    out.push_back(os.str());
  }
  // Young-type widths need the conditional packets to be far-field at the detectors.
  const double far2 = (cfg.lambda2 * (cfg.l1 + cfg.l2) + cfg.lambda1 * cfg.l2) / kPi;
  if (cfg.gamma_sq() > 0.1 * far2) {
    std::ostringstream os;
    os << "near-field photon 2: gamma^2 = " << cfg.gamma_sq() << " m^2 is not << (lambda2 L + lambda1 L2)/pi = "
       << far2 << " m^2";
    out.push_back(os.str());
  }
  const double far1 = cfg.lambda1 * cfg.l1 / kPi;
  if (cfg.epsilon * cfg.epsilon > 0.1 * far1) {
    std::ostringstream os;
    os << "near-field photon 1: epsilon^2 = " << cfg.epsilon * cfg.epsilon << " m^2 is not << lambda1 L1/pi = "
       << far1 << " m^2";
    out.push_back(os.str());
  }
  return out;
}

Uncertainty uncertainties(const ExperimentConfig& cfg) {
  const double s = cfg.sigma;
  const double w = cfg.omega_cap;
  return {std::sqrt(w * w + 1.0 / (4.0 * s * s)), 0.5 * std::sqrt(s * s + 1.0 / (4.0 * w * w))};
}

}  // namespace ghost
