#include "ghost/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fft.hpp"
#include "ghost/errors.hpp"

namespace ghost {

using cplx = std::complex<double>;
using namespace std::complex_literals;

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Spectral power below this fraction of the peak is treated as empty.
constexpr double kNegligible = 1e-14;
// Norm fraction tolerated in the outer band of the window.
constexpr double kEdgeTolerance = 1e-6;

struct AxisLayout {
  int n;        // samples along the axis
  int howmany;  // independent lines
  int stride;
  int dist;
  double dz;
};

AxisLayout layout(const GridSpec& s, Detector axis) {
  if (axis == Detector::d1) return {s.n1, s.n2, s.n2, 1, s.dz1()};
  return {s.n2, s.n1, 1, s.n2, s.dz2()};
}

// |Psi|^2 summed over the other axis, per sample index along `axis`.
std::vector<double> axis_power(const WavefunctionGrid& g, Detector axis) {
  const auto& s = g.spec;
  std::vector<double> out(static_cast<std::size_t>(axis == Detector::d1 ? s.n1 : s.n2), 0.0);
  for (int i1 = 0; i1 < s.n1; ++i1)
    for (int i2 = 0; i2 < s.n2; ++i2) out[static_cast<std::size_t>(axis == Detector::d1 ? i1 : i2)] += std::norm(g.at(i1, i2));
  return out;
}

void check_edges(const WavefunctionGrid& g, Detector axis, const char* stage) {
  const auto power = axis_power(g, axis);
  const std::size_t n = power.size();
  const std::size_t band = std::max<std::size_t>(2, n / 64);
  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += power[i];
    if (i < band || i >= n - band) edge += power[i];
  }
  if (total > 0.0 && edge / total > kEdgeTolerance)
    throw ClippingError(std::string(stage) + ": wave function reaches the grid edge along z" +
                        (axis == Detector::d1 ? "1" : "2") + " (edge fraction " + std::to_string(edge / total) + ")");
}

void record(WavefunctionGrid& g, std::string stage) { g.audit.push_back({std::move(stage), g.norm()}); }

}  // namespace

GridSpec GridSpec::symmetric(double half1, int n1, double half2, int n2) {
  return {-half1, half1, -half2, half2, n1, n2};
}

void GridSpec::validate() const {
  if (!is_pow2(n1) || !is_pow2(n2) || n1 < 64 || n2 < 64)
    throw ResolutionError("grid sample counts must be powers of two and at least 64");
  if (!(z1_max > z1_min) || !(z2_max > z2_min)) throw DomainError("grid window is empty");
}

double WavefunctionGrid::norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * spec.dz1() * spec.dz2();
}

WavefunctionGrid grid_initial_state(double sigma, double omega_cap, const GridSpec& spec) {
  spec.validate();
  if (!(sigma > 0.0) || !(omega_cap > 0.0)) throw DomainError("sigma and Omega must be positive");
  WavefunctionGrid g{spec, std::vector<cplx>(spec.size()), {}};
  const double pref = std::sqrt(sigma / (kPi * omega_cap));
  const double s2 = sigma * sigma;
  const double w4 = 4.0 * omega_cap * omega_cap;
  for (int i1 = 0; i1 < spec.n1; ++i1) {
    const double z1 = spec.z1(i1);
    for (int i2 = 0; i2 < spec.n2; ++i2) {
      const double z2 = spec.z2(i2);
      const double diff = z1 - z2;
      const double sum = z1 + z2;
      g.at(i1, i2) = pref * std::exp(-diff * diff * s2 - sum * sum / w4);
    }
  }
  record(g, "source (closed-form prefactor)");
  const double raw = g.audit.back().norm;
  // The prefactor integrates to exactly 1/2 over the plane.
  const double captured = raw / 0.5;
  if (captured < 1.0 - 1e-6)
    throw ClippingError("source state clipped by the grid window (captured norm fraction " + std::to_string(captured) +
                        ")");
  if (captured > 1.0 + 1e-6) throw ResolutionError("grid spacing does not resolve the source correlation width");
  const double scale = 1.0 / std::sqrt(raw);
  for (auto& v : g.values) v *= scale;
  record(g, "source (normalized)");
  return g;
}

WavefunctionGrid grid_propagate(const WavefunctionGrid& grid, Detector axis, double lambda, double dist) {
  if (dist < 0.0) throw DomainError("propagation distance must be non-negative");
  WavefunctionGrid g = grid;
  const std::string stage = std::string("propagate z") + (axis == Detector::d1 ? "1" : "2");
  if (dist == 0.0) {
    record(g, stage);
    return g;
  }
  const AxisLayout lay = layout(g.spec, axis);
  detail::FftPlan fwd(g.values, lay.n, lay.howmany, lay.stride, lay.dist, detail::FftPlan::Direction::forward);
  detail::FftPlan bwd(g.values, lay.n, lay.howmany, lay.stride, lay.dist, detail::FftPlan::Direction::backward);
  fwd.execute(g.values);

  // Largest |k| carrying non-negligible power sets the aliasing test.
  const auto power = axis_power(g, axis);
  const double peak = *std::max_element(power.begin(), power.end());
  const double dk = 2.0 * kPi / (lay.n * lay.dz);
  double kmax = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i)
    if (power[i] > kNegligible * peak) kmax = std::max(kmax, std::abs(detail::fft_wavenumber(i, power.size(), lay.dz)));
  const double phase_step = lambda * dist * kmax * dk / (2.0 * kPi);
  if (phase_step > kPi)
    throw ResolutionError(stage + ": kernel phase changes by " + std::to_string(phase_step) +
                          " rad between adjacent k samples; refine the window");

  const double c = lambda * dist / (4.0 * kPi);
  const double inv_n = 1.0 / lay.n;
  std::vector<cplx> kernel(static_cast<std::size_t>(lay.n));
  for (int i = 0; i < lay.n; ++i) {
    const double k = detail::fft_wavenumber(static_cast<std::size_t>(i), static_cast<std::size_t>(lay.n), lay.dz);
    kernel[static_cast<std::size_t>(i)] = std::exp(-1i * c * k * k) * inv_n;
  }
  for (int i1 = 0; i1 < g.spec.n1; ++i1)
    for (int i2 = 0; i2 < g.spec.n2; ++i2) g.at(i1, i2) *= kernel[static_cast<std::size_t>(axis == Detector::d1 ? i1 : i2)];
  bwd.execute(g.values);

  check_edges(g, axis, stage.c_str());
  record(g, stage);
  return g;
}

SlitProjection grid_slit_projection(const WavefunctionGrid& grid, double slit_sep, double epsilon) {
  const auto& s = grid.spec;
  if (!(epsilon > 0.0) || !(slit_sep > 0.0)) throw DomainError("slit width and separation must be positive");
  if (s.dz1() > epsilon / 8.0) throw ResolutionError("grid spacing along z1 does not resolve the slit width (need dz <= epsilon/8)");

  const double z0 = 0.5 * slit_sep;
  const double amp = std::pow(2.0 / kPi, 0.25) / std::sqrt(epsilon);
  std::vector<double> phi_a(static_cast<std::size_t>(s.n1)), phi_b(static_cast<std::size_t>(s.n1));
  for (int i1 = 0; i1 < s.n1; ++i1) {
    const double z = s.z1(i1);
    phi_a[static_cast<std::size_t>(i1)] = amp * std::exp(-(z - z0) * (z - z0) / (epsilon * epsilon));
    phi_b[static_cast<std::size_t>(i1)] = amp * std::exp(-(z + z0) * (z + z0) / (epsilon * epsilon));
  }

  SlitProjection out;
  out.psi_a.assign(static_cast<std::size_t>(s.n2), 0.0);
  out.psi_b.assign(static_cast<std::size_t>(s.n2), 0.0);
  const double dz1 = s.dz1();
  for (int i1 = 0; i1 < s.n1; ++i1) {
    const double wa = phi_a[static_cast<std::size_t>(i1)] * dz1;
    const double wb = phi_b[static_cast<std::size_t>(i1)] * dz1;
    if (wa == 0.0 && wb == 0.0) continue;
    for (int i2 = 0; i2 < s.n2; ++i2) {
      const cplx v = grid.at(i1, i2);
      out.psi_a[static_cast<std::size_t>(i2)] += wa * v;
      out.psi_b[static_cast<std::size_t>(i2)] += wb * v;
    }
  }

  WavefunctionGrid g{s, std::vector<cplx>(s.size()), grid.audit};
  for (int i1 = 0; i1 < s.n1; ++i1)
    for (int i2 = 0; i2 < s.n2; ++i2)
      g.at(i1, i2) = phi_a[static_cast<std::size_t>(i1)] * out.psi_a[static_cast<std::size_t>(i2)] +
                     phi_b[static_cast<std::size_t>(i1)] * out.psi_b[static_cast<std::size_t>(i2)];

  const double before = grid.norm();
  record(g, "slit projection (kept)");
  const double kept = g.audit.back().norm / before;
  out.discarded = 1.0 - kept;
  if (out.discarded > 0.999999) throw DomainError("double slit blocks the entire state");
  const double scale = 1.0 / std::sqrt(g.audit.back().norm);
  for (auto& v : g.values) v *= scale;
  record(g, "slit projection (renormalized)");
  out.grid = std::move(g);
  return out;
}

WavefunctionGrid grid_lens(const WavefunctionGrid& grid, Detector axis, double f, double lambda) {
  WavefunctionGrid g = grid;
  const std::string stage = std::string("lens z") + (axis == Detector::d1 ? "1" : "2");
  if (std::isinf(f)) {
    record(g, stage);
    return g;
  }
  if (f == 0.0) throw DomainError("focal length must be non-zero");
  const auto& s = g.spec;
  const AxisLayout lay = layout(s, axis);
  const auto power = axis_power(g, axis);
  const double peak = *std::max_element(power.begin(), power.end());
  double zmax = 0.0;
  for (int i = 0; i < lay.n; ++i) {
    if (power[static_cast<std::size_t>(i)] <= kNegligible * peak) continue;
    zmax = std::max(zmax, std::abs(axis == Detector::d1 ? s.z1(i) : s.z2(i)));
  }
  const double phase_step = 2.0 * kPi * zmax * lay.dz / (lambda * std::abs(f));
  if (phase_step > kPi)
    throw ResolutionError(stage + ": lens phase changes by " + std::to_string(phase_step) +
                          " rad between adjacent samples; refine the grid");

  std::vector<cplx> mask(static_cast<std::size_t>(lay.n));
  for (int i = 0; i < lay.n; ++i) {
    const double z = axis == Detector::d1 ? s.z1(i) : s.z2(i);
    mask[static_cast<std::size_t>(i)] = std::exp(-1i * kPi * z * z / (lambda * f));
  }
  for (int i1 = 0; i1 < s.n1; ++i1)
    for (int i2 = 0; i2 < s.n2; ++i2) g.at(i1, i2) *= mask[static_cast<std::size_t>(axis == Detector::d1 ? i1 : i2)];
  record(g, stage);
  return g;
}

std::vector<double> grid_coincidence(const WavefunctionGrid& grid) {
  std::vector<double> out(grid.values.size());
  std::transform(grid.values.begin(), grid.values.end(), out.begin(), [](const cplx& v) { return std::norm(v); });
  return out;
}

Profile1D grid_slice(const WavefunctionGrid& grid, Detector fixed, double position) {
  const auto& s = grid.spec;
  const bool fix1 = fixed == Detector::d1;
  const double lo = fix1 ? s.z1_min : s.z2_min;
  const double hi = fix1 ? s.z1_max : s.z2_max;
  const double dz = fix1 ? s.dz1() : s.dz2();
  if (position < lo || position > hi - dz) throw DomainError("fixed detector position lies outside the grid");
  const int idx = std::clamp(static_cast<int>(std::lround((position - lo) / dz)), 0, (fix1 ? s.n1 : s.n2) - 1);

  Profile1D p;
  const int n = fix1 ? s.n2 : s.n1;
  p.positions.resize(static_cast<std::size_t>(n));
  p.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    p.positions[static_cast<std::size_t>(i)] = fix1 ? s.z2(i) : s.z1(i);
    p.values[static_cast<std::size_t>(i)] = std::norm(fix1 ? grid.at(idx, i) : grid.at(i, idx));
  }
  return p;
}

}  // namespace ghost
