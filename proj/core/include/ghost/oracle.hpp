#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ghost/analysis.hpp"
#include "ghost/config.hpp"
#include "ghost/gaussian.hpp"
#include "ghost/grid.hpp"

namespace ghost {

struct GridOptions {
  int max_samples = 4096;          ///< per axis
  double samples_per_epsilon = 8;  ///< dz = epsilon / samples_per_epsilon
  double envelope_sds = 6.0;       ///< window half-width in intensity standard deviations
};

/// Smallest symmetric power-of-two grid that holds every stage of the
/// no-lens pipeline. Throws ResolutionError when it needs more than
/// `max_samples` per axis.
GridSpec plan_grid(const ExperimentConfig& cfg, const GridOptions& opts = {});

/// Desk-scale version of `cfg`: transverse lengths x0.1 and longitudinal
/// lengths x0.01, which leaves every Fresnel number unchanged, with Omega then
/// capped so the source fits a `max_samples` grid.
ExperimentConfig scaled_config(const ExperimentConfig& cfg, const GridOptions& opts = {});

/// Brute-force pipeline: sampled source -> flight L2 -> slit projection ->
/// flight L1 for both photons.
struct GridRun {
  WavefunctionGrid detector;  ///< state at the detector planes
  double discarded = 0.0;     ///< norm fraction blocked at the slit
  double source_raw_norm = 0.0;  ///< integral of the source with its closed-form prefactor
  std::vector<std::complex<double>> psi_a;  ///< conditional packet behind slit A (z2 samples)
  std::vector<double> z2;                   ///< z2 sample positions
};

GridRun run_grid_pipeline(const ExperimentConfig& cfg, const GridSpec& spec);

/// Complex Gaussian c * exp(-(z - center)^2 / width) fitted to samples by
/// weighted least squares on log(psi) with an unwrapped phase.
struct GaussianFit {
  std::complex<double> center;
  std::complex<double> width;
};

GaussianFit fit_complex_gaussian(std::span<const double> z, std::span<const std::complex<double>> psi);

struct ComparisonReport {
  ExperimentConfig cfg;  ///< geometry actually simulated
  bool scaled = false;
  GridSpec grid;
  Profile1D closed_form;  ///< P(0, z2) from the closed-form pipeline
  Profile1D oracle;       ///< P(0, z2) from the grid
  double linf_rel = 0.0;  ///< max |closed - grid| / max grid
  double l2_rel = 0.0;
  /// Peak-normalized shape error of the grid against the exact projection,
  /// i.e. the discretization error alone.
  double exact_linf_rel = 0.0;
  std::optional<double> width_closed;
  std::optional<double> width_oracle;
  double width_analytic = 0.0;
  double discarded = 0.0;
  double source_raw_norm = 0.0;
  SlitParams slit_formula;
  ExactSlitParams slit_exact;
  GaussianFit slit_fit;
  std::vector<NormAudit> audit;
  double seconds = 0.0;
};

/// P(0, z2) up to a constant, built from the exact conditional packets
/// (complex centre) instead of the z0', Gamma formulas.
std::vector<double> exact_projection_profile(const ExperimentConfig& cfg, std::span<const double> z2);

/// Runs the closed-form and grid pipelines on the same geometry and compares
/// the coincidence profile with D1 fixed at z1 = 0.
ComparisonReport compare_oracle(const ExperimentConfig& cfg, bool scaled, const GridOptions& opts = {});

/// `key: value` lines.
void write_report(std::ostream& os, const ComparisonReport& rep);

/// CSV with header z_m,closed_form_per_m2,oracle_per_m2.
void write_profiles_csv(std::ostream& os, const ComparisonReport& rep);

}  // namespace ghost
