#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "ghost/config.hpp"

namespace ghost {

using cplx = std::complex<double>;

/// One transverse Gaussian packet, psi(z) = amp * exp(-(z - center)^2 / width).
///
/// `width` is the complex width parameter B [m^2]. Free flight over a distance
/// L adds i*lambda*L/pi to it; Re(B) > 0 keeps the packet normalizable.
struct GaussianMode {
  cplx amp{1.0, 0.0};
  double center = 0.0;
  cplx width{1.0, 0.0};

  cplx operator()(double z) const;
  double norm_sq() const;
  /// Intensity standard deviation: |psi|^2 ~ exp(-(z-c)^2 / (2 s^2)).
  double intensity_sd() const;
};

/// A normalized copy of a real Gaussian of width parameter `width` centred at `center`.
GaussianMode normalized_mode(double center, cplx width);

/// <a|b> = integral of conj(a) b.
cplx mode_overlap(const GaussianMode& a, const GaussianMode& b);

/// Free paraxial flight. The carrier phase exp(2 pi i dist / lambda) is dropped.
GaussianMode propagate_mode(const GaussianMode& mode, double lambda, double dist);

/// Thin converging lens acting on a packet that has flown `dist_before` from a
/// waist of real width parameter Re(width). Returns the packet with width
/// parameter (s f/(L-f))^2 - i (lambda/pi) f L/(L-f), same norm, same centre.
///
/// Throws CollimationError when dist_before == f and DomainError when the
/// mode's imaginary width is inconsistent with `dist_before`.
GaussianMode lens_transform_mode(const GaussianMode& mode, double f, double dist_before, double lambda);

struct ProductTerm {
  cplx coeff{1.0, 0.0};
  GaussianMode mode1;
  GaussianMode mode2;
};

/// Finite superposition of product states photon1 (x) photon2.
struct TwoPhotonState {
  std::vector<ProductTerm> terms;
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  cplx amplitude(double z1, double z2) const;
  double norm_sq() const;
};

TwoPhotonState normalize_state(const TwoPhotonState& state);
TwoPhotonState propagate_state(const TwoPhotonState& state, double dist1, double dist2);

/// |Psi(z1, z2)|^2 [1/m^2].
double coincidence_density(const TwoPhotonState& state, double z1, double z2);

/// Single-photon density after integrating the partner out in closed form.
double marginal_density(const TwoPhotonState& state, Detector which, double z);

/// Largest local fringe visibility of a photon's marginal, i.e. the
/// cross-term magnitude over the direct terms, maximised over `zs`.
double marginal_cross_visibility(const TwoPhotonState& state, Detector which, std::span<const double> zs);

// ---------------------------------------------------------------------------
// Slit stage

enum class SlitModel {
  full,              ///< complete z0' and Gamma expressions
  good_correlation,  ///< Omega >> epsilon, 1/sigma: z0' = z0, Gamma = gamma^2 + i(l1+l2)L2/pi
};

/// Centre and complex width of photon 2's packet conditioned on photon 1
/// having crossed one slit.
struct SlitParams {
  double z0_prime = 0.0;
  cplx gamma_cap;
};

SlitParams conditional_slit_params(const ExperimentConfig& cfg, SlitModel model = SlitModel::full);

/// Same quantity obtained by projecting the propagated source state onto a
/// slit mode with 2x2 complex Gaussian algebra, without any approximation.
/// The exact centre acquires a small imaginary part (a transverse tilt).
struct ExactSlitParams {
  cplx center;
  cplx gamma_cap;
};

ExactSlitParams exact_slit_params(const ExperimentConfig& cfg);

/// Two-term state right behind the double slit, normalized, blocked part dropped.
TwoPhotonState post_slit_state(const ExperimentConfig& cfg, SlitModel model = SlitModel::full);

/// Post-slit state with both photons flown L1: photon 1 to D1, photon 2 to D2.
TwoPhotonState detector_state(const ExperimentConfig& cfg, SlitModel model = SlitModel::full);

/// Photon 2 flies L1 - f, passes the lens, then flies f to D2. Photon 1 flies L1.
TwoPhotonState apply_lens_scenario(const ExperimentConfig& cfg, SlitModel model = SlitModel::full);

// ---------------------------------------------------------------------------
// Fringe predictions

enum class Scenario { same_color, two_color, lens, scan_d1 };

/// Young-type fringe width in the far-field limit.
double analytic_fringe_width(const ExperimentConfig& cfg, Scenario scenario);

/// Non-empty when the far-field approximation behind analytic_fringe_width is poor.
std::optional<std::string> fringe_regime_warning(const ExperimentConfig& cfg, Scenario scenario);

/// Phase coefficients of the coincidence cosine, cos(theta1 z1 + theta2 z2), in
/// the good-correlation limit. theta_D and theta_L are theta2 for equal and
/// unequal wavelengths respectively.
double theta1(const ExperimentConfig& cfg);
double theta2(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Profiles

/// Coincidence density along the scanning detector with the other one fixed.
std::vector<double> coincidence_profile(const TwoPhotonState& state, Detector scanning, double fixed_pos,
                                        std::span<const double> zs);

std::vector<double> marginal_profile(const TwoPhotonState& state, Detector which, std::span<const double> zs);

/// n equally spaced samples on [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace ghost
