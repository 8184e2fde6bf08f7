#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ghost/analysis.hpp"
#include "ghost/config.hpp"

namespace ghost {

/// Uniform periodic sampling of the (z1, z2) plane. Sample i sits at
/// min + i (max - min) / n, so a symmetric window contains z = 0.
struct GridSpec {
  double z1_min = 0, z1_max = 0;
  double z2_min = 0, z2_max = 0;
  int n1 = 0, n2 = 0;

  static GridSpec symmetric(double half1, int n1, double half2, int n2);

  double dz1() const { return (z1_max - z1_min) / n1; }
  double dz2() const { return (z2_max - z2_min) / n2; }
  double z1(int i) const { return z1_min + i * dz1(); }
  double z2(int i) const { return z2_min + i * dz2(); }
  std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }

  /// n1, n2 powers of two and at least 64; non-empty windows.
  void validate() const;
};

struct NormAudit {
  std::string stage;
  double norm;
};

/// Sampled two-photon amplitude, row-major: values[i1 * n2 + i2].
struct WavefunctionGrid {
  GridSpec spec;
  std::vector<std::complex<double>> values;
  std::vector<NormAudit> audit;  ///< norm after every transformation

  std::complex<double>& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * spec.n2 + i2]; }
  const std::complex<double>& at(int i1, int i2) const {
    return values[static_cast<std::size_t>(i1) * spec.n2 + i2];
  }
  /// Trapezoid-rule integral of |Psi|^2 (periodic grid).
  double norm() const;
};

/// Samples the source state with its closed-form prefactor sqrt(sigma/(pi Omega)),
/// records that raw norm in the audit, then renormalizes to 1.
/// Throws ClippingError when more than 1e-6 of the norm lies outside the window.
WavefunctionGrid grid_initial_state(double sigma, double omega_cap, const GridSpec& spec);

/// Free flight of one photon by an FFT quadratic-dispersion kernel
/// exp(-i lambda dist k^2 / (4 pi)). Throws ResolutionError on kernel aliasing
/// and ClippingError when the packet reaches the window edge.
WavefunctionGrid grid_propagate(const WavefunctionGrid& grid, Detector axis, double lambda, double dist);

struct SlitProjection {
  WavefunctionGrid grid;             ///< renormalized two-slit component
  double discarded = 0.0;            ///< norm fraction blocked by the mask
  std::vector<std::complex<double>> psi_a;  ///< <phi_A|Psi>(z2)
  std::vector<std::complex<double>> psi_b;  ///< <phi_B|Psi>(z2)
};

/// Projects photon 1 onto the two normalized slit modes at +-d/2 of width epsilon.
SlitProjection grid_slit_projection(const WavefunctionGrid& grid, double slit_sep, double epsilon);

/// Thin-lens phase exp(-i pi z^2 / (lambda f)) on one axis. f = +inf is the identity.
WavefunctionGrid grid_lens(const WavefunctionGrid& grid, Detector axis, double f, double lambda);

/// |Psi|^2 samples in grid order.
std::vector<double> grid_coincidence(const WavefunctionGrid& grid);

/// Coincidence density along the free axis with the `fixed` detector at the
/// nearest sample to `position`.
Profile1D grid_slice(const WavefunctionGrid& grid, Detector fixed, double position);

}  // namespace ghost
