#pragma once

#include <optional>
#include <vector>

namespace ghost {

/// Uniformly sampled, non-negative 1D density.
struct Profile1D {
  std::vector<double> positions;  ///< [m], uniform spacing
  std::vector<double> values;

  double spacing() const { return positions[1] - positions[0]; }
  std::size_t size() const { return values.size(); }

  /// Throws AnalysisError unless sizes match, spacing is uniform, there are at
  /// least 64 samples and every value is finite and non-negative.
  void validate() const;
  double centroid() const;
};

struct FringeReport {
  double fringe_width = 0.0;    ///< cosine period [m]
  double visibility = 0.0;      ///< central fringe (max-min)/(max+min)
  double envelope_width = 0.0;  ///< standard deviation of the fitted Gaussian envelope [m]
  int n_fringes_resolved = 0;   ///< whole periods inside the analysis window
};

struct FringeOptions {
  /// Expected period, if known; sets the smoothing kernel to 1/8 of it.
  std::optional<double> expected_period;
  /// Half-width of the analysis window in envelope standard deviations.
  double window_sds = 2.5;
  /// Fitted modulation depth (relative to the envelope) below which the profile
  /// is reported as fringeless.
  double min_modulation = 1e-3;
};

/// Measures the fringe period of an envelope-modulated profile.
///
/// Returns std::nullopt ("no fringes") when no spectral peak stands out of the
/// noise floor or the modulation is shallower than `min_modulation`. Throws
/// AnalysisError for malformed profiles or when fewer than three periods fit
/// inside the envelope.
std::optional<FringeReport> extract_fringe_width(const Profile1D& p, const FringeOptions& opts = {});

/// (max - min)/(max + min) over a window of full width `window` centred on the
/// profile centroid. A window holding fewer than two local extrema is fringeless
/// and scores 0.
double visibility(const Profile1D& p, double window);

}  // namespace ghost
