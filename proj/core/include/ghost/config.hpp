#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ghost {

inline constexpr double kPi = std::numbers::pi;

enum class Detector { d1 = 1, d2 = 2 };

/// Which detector scans and over which transverse range. The other detector
/// sits at `ExperimentConfig::fixed_pos`.
struct ScanAxis {
  Detector detector = Detector::d2;
  double z_min = -10e-3;
  double z_max = 10e-3;
  int samples = 2048;
};

/// Physical parameters of one ghost-interference run, SI units throughout.
///
/// Photon 1 crosses the double slit `l2` after the source and is detected `l1`
/// further on. Photon 2 flies the same times without any aperture.
struct ExperimentConfig {
  double lambda1 = 0;     ///< photon 1 wavelength [m]
  double lambda2 = 0;     ///< photon 2 wavelength [m]
  double sigma = 0;       ///< momentum-spread parameter [1/m]
  double omega_cap = 0;   ///< position-spread parameter [m]
  double epsilon = 0;     ///< slit-mode width [m]
  double slit_sep = 0;    ///< slit separation d = 2 z0 [m]
  double l1 = 0;          ///< slit -> D1 distance [m]
  double l2 = 0;          ///< source -> slit distance [m]
  std::optional<double> lens_focal;  ///< converging lens one focal length before D2
  ScanAxis scan;
  double fixed_pos = 0;   ///< position of the non-scanning detector [m]

  double z0() const { return 0.5 * slit_sep; }
  /// Slit -> source -> D2 distance, L1 + 2 L2.
  double total_d() const { return l1 + 2.0 * l2; }
  double gamma_sq() const { return epsilon * epsilon + 1.0 / (sigma * sigma); }
  double alpha() const { return 1.0 + lambda1 / lambda2; }

  /// Throws ConfigError naming the first offending config-file key (e.g. d_mm).
  void validate() const;
};

/// Canonical two-colour configuration: λ1 = 1530 nm, λ2 = 780 nm, L1 = 1.15 m,
/// L2 = 0.325 m, d = 0.5 mm, ε = 0.1 mm, γ = 0.11 mm, Ω = 10 mm.
ExperimentConfig reference_config();

/// Human-readable notes for parameters outside the regime where the
/// closed-form approximations hold. Empty when everything is comfortable.
std::vector<std::string> regime_warnings(const ExperimentConfig& cfg);

struct Uncertainty {
  double delta_z;  ///< [m]
  double delta_k;  ///< [1/m]
};

/// Position and wave-vector spread of either photon in the source state.
/// Both are quoted in the amplitude-width convention exp(-z²/Δz²), so Δz is
/// twice the standard deviation of |Ψ|² and Δk half of it.
Uncertainty uncertainties(const ExperimentConfig& cfg);

}  // namespace ghost
