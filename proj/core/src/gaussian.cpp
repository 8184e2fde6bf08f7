#include "ghost/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ghost/errors.hpp"

namespace ghost {

using namespace std::complex_literals;

cplx GaussianMode::operator()(double z) const {
  const double dz = z - center;
  return amp * std::exp(-dz * dz / width);
}

double GaussianMode::norm_sq() const {
  return std::norm(amp) * std::sqrt(kPi * std::norm(width) / (2.0 * width.real()));
}

double GaussianMode::intensity_sd() const { return std::sqrt(std::norm(width) / (4.0 * width.real())); }

GaussianMode normalized_mode(double center, cplx width) {
  if (!(width.real() > 0.0)) throw DomainError("Gaussian width parameter must have a positive real part");
  GaussianMode m{1.0, center, width};
  m.amp = 1.0 / std::sqrt(m.norm_sq());
  return m;
}

cplx mode_overlap(const GaussianMode& a, const GaussianMode& b) {
  const cplx u = 1.0 / std::conj(a.width);
  const cplx v = 1.0 / b.width;
  const cplx s = u + v;
  const double sep = a.center - b.center;
  return std::conj(a.amp) * b.amp * std::sqrt(kPi / s) * std::exp(-u * v * sep * sep / s);
}

GaussianMode propagate_mode(const GaussianMode& mode, double lambda, double dist) {
  if (dist < 0.0) throw DomainError("propagation distance must be non-negative");
  if (dist == 0.0) return mode;
  const cplx width = mode.width + 1i * lambda * dist / kPi;
  return {mode.amp * std::sqrt(mode.width / width), mode.center, width};
}

GaussianMode lens_transform_mode(const GaussianMode& mode, double f, double dist_before, double lambda) {
  if (!(f > 0.0)) throw DomainError("focal length must be positive");
  if (!(dist_before > 0.0)) throw DomainError("distance before the lens must be positive");
  if (std::abs(dist_before - f) <= 1e-12 * f)
    throw CollimationError("lens one focal length from the waist: image at infinity");
  if (dist_before < f) throw DomainError("lens closer than one focal length to the waist forms no real image");

  const double reduced = lambda / kPi;
  const double spread = reduced * dist_before;
  if (std::abs(mode.width.imag() - spread) > 1e-6 * spread)
    throw DomainError("mode width is not waist + i lambda L / pi for the given distance");

  const double waist = std::sqrt(mode.width.real());
  const double image_waist = waist * f / (dist_before - f);
  const cplx width = image_waist * image_waist - 1i * reduced * f * dist_before / (dist_before - f);
  const cplx before = waist + 1i * spread / waist;
  const cplx after = image_waist - 1i * spread / waist;
  return {mode.amp * std::sqrt(before) / std::sqrt(after), mode.center, width};
}

cplx TwoPhotonState::amplitude(double z1, double z2) const {
  cplx sum = 0.0;
  for (const auto& t : terms) sum += t.coeff * t.mode1(z1) * t.mode2(z2);
  return sum;
}

double TwoPhotonState::norm_sq() const {
  double total = 0.0;
  for (const auto& a : terms)
    for (const auto& b : terms)
      total += (std::conj(a.coeff) * b.coeff * mode_overlap(a.mode1, b.mode1) * mode_overlap(a.mode2, b.mode2))
                   .real();
  return total;
}

TwoPhotonState normalize_state(const TwoPhotonState& state) {
  if (state.terms.empty()) throw DomainError("state has no terms");
  const double n = state.norm_sq();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero-norm state");
  TwoPhotonState out = state;
  const double scale = 1.0 / std::sqrt(n);
  for (auto& t : out.terms) t.coeff *= scale;
  return out;
}

TwoPhotonState propagate_state(const TwoPhotonState& state, double dist1, double dist2) {
  TwoPhotonState out = state;
  for (auto& t : out.terms) {
    t.mode1 = propagate_mode(t.mode1, state.lambda1, dist1);
    t.mode2 = propagate_mode(t.mode2, state.lambda2, dist2);
  }
  return out;
}

double coincidence_density(const TwoPhotonState& state, double z1, double z2) {
  return std::norm(state.amplitude(z1, z2));
}

namespace {

const GaussianMode& observed(const ProductTerm& t, Detector which) {
  return which == Detector::d1 ? t.mode1 : t.mode2;
}

const GaussianMode& traced(const ProductTerm& t, Detector which) {
  return which == Detector::d1 ? t.mode2 : t.mode1;
}

}  // namespace

double marginal_density(const TwoPhotonState& state, Detector which, double z) {
  double total = 0.0;
  for (const auto& a : state.terms) {
    const cplx va = a.coeff * observed(a, which)(z);
    for (const auto& b : state.terms) {
      const cplx vb = b.coeff * observed(b, which)(z);
      total += (std::conj(va) * vb * mode_overlap(traced(a, which), traced(b, which))).real();
    }
  }
  return std::max(total, 0.0);
}

double marginal_cross_visibility(const TwoPhotonState& state, Detector which, std::span<const double> zs) {
  const auto& terms = state.terms;
  double worst = 0.0;
  for (double z : zs) {
    double direct = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const cplx vi = terms[i].coeff * observed(terms[i], which)(z);
      direct += std::norm(vi) * traced(terms[i], which).norm_sq();
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        const cplx vj = terms[j].coeff * observed(terms[j], which)(z);
        cross += 2.0 * std::abs(std::conj(vi) * vj * mode_overlap(traced(terms[i], which), traced(terms[j], which)));
      }
    }
    if (direct > 0.0) worst = std::max(worst, cross / direct);
  }
  return worst;
}

// ---------------------------------------------------------------------------

SlitParams conditional_slit_params(const ExperimentConfig& cfg, SlitModel model) {
  cfg.validate();
  const double l1 = cfg.lambda1;
  const double l2 = cfg.lambda2;
  const double flight = cfg.l2;  // c t0
  if (model == SlitModel::good_correlation)
    return {cfg.z0(), cfg.gamma_sq() + 1i * (l1 + l2) * flight / kPi};

  const double s2 = cfg.sigma * cfg.sigma;
  const double w2 = cfg.omega_cap * cfg.omega_cap;
  const double e2 = cfg.epsilon * cfg.epsilon;
  const double corr = 4.0 * w2 * s2;

  const double z0p = cfg.z0() / ((corr + 1.0) / (corr - 1.0) + 4.0 * e2 / (4.0 * w2 - 1.0 / s2));

  const double reduced = l1 * l2 / (l1 + l2);
  const cplx num = e2 + (1.0 / s2) * (1.0 + e2 / (4.0 * w2)) + 1i * flight / (2.0 * kPi * s2 * w2) * reduced +
                   1i * flight / kPi * (l1 + l2) * (1.0 + 1.0 / corr);
  const cplx den = 1.0 + e2 / w2 + 1i * flight / (4.0 * kPi * w2) * (l1 + l2 + reduced) + 1.0 / corr;
  return {z0p, num / den};
}

ExactSlitParams exact_slit_params(const ExperimentConfig& cfg) {
  cfg.validate();
  // Inverse quadratic form of the source, [[p0, q0], [q0, p0]], plus the flight
  // terms i lambda L2 / pi on the diagonal. The projection onto the slit mode is
  // reduced by hand so no large terms cancel when Omega is big.
  const double w2 = cfg.omega_cap * cfg.omega_cap;
  const double r2 = 1.0 / (4.0 * cfg.sigma * cfg.sigma);
  const double p0 = w2 + r2;
  const double q0 = w2 - r2;
  const double fa = cfg.lambda1 * cfg.l2 / kPi;
  const double fb = cfg.lambda2 * cfg.l2 / kPi;
  const cplx det = cplx(4.0 * w2 * r2 - fa * fb, p0 * (fa + fb));
  const double e2 = cfg.epsilon * cfg.epsilon;
  const cplx denom = cplx(e2 + p0, fa);
  const cplx gamma = (e2 * cplx(p0, fb) + det) / denom;
  const cplx center = cfg.z0() * q0 / denom;
  return {center, gamma};
}

TwoPhotonState post_slit_state(const ExperimentConfig& cfg, SlitModel model) {
  const SlitParams sp = conditional_slit_params(cfg, model);
  const double e2 = cfg.epsilon * cfg.epsilon;
  TwoPhotonState state;
  state.lambda1 = cfg.lambda1;
  state.lambda2 = cfg.lambda2;
  state.terms.push_back({1.0, normalized_mode(cfg.z0(), e2), normalized_mode(sp.z0_prime, sp.gamma_cap)});
  state.terms.push_back({1.0, normalized_mode(-cfg.z0(), e2), normalized_mode(-sp.z0_prime, sp.gamma_cap)});
  return normalize_state(state);
}

TwoPhotonState detector_state(const ExperimentConfig& cfg, SlitModel model) {
  return propagate_state(post_slit_state(cfg, model), cfg.l1, cfg.l1);
}

TwoPhotonState apply_lens_scenario(const ExperimentConfig& cfg, SlitModel model) {
  if (!cfg.lens_focal) throw ConfigError("f_m", "lens focal length required");
  const double f = *cfg.lens_focal;
  TwoPhotonState state = propagate_state(post_slit_state(cfg, model), cfg.l1, cfg.l1 - f);
  const double reduced = cfg.lambda2 / kPi;
  for (auto& t : state.terms) {
    // Photon 2 appears to have flown (1 + l1/l2) L2 + L1 - f from a waist of width gamma.
    const double apparent = t.mode2.width.imag() / reduced;
    t.mode2 = propagate_mode(lens_transform_mode(t.mode2, f, apparent, cfg.lambda2), cfg.lambda2, f);
  }
  // The width mapping keeps each packet's norm but not the cross overlaps.
  return normalize_state(state);
}

// ---------------------------------------------------------------------------

double analytic_fringe_width(const ExperimentConfig& cfg, Scenario scenario) {
  const double d = cfg.slit_sep;
  switch (scenario) {
    case Scenario::same_color:
      return cfg.lambda2 * cfg.total_d() / d;
    case Scenario::two_color:
      return (cfg.lambda2 * (cfg.l1 + cfg.l2) + cfg.lambda1 * cfg.l2) / d;
    case Scenario::lens: {
      if (!cfg.lens_focal) throw ConfigError("f_m", "lens focal length required");
      const double f = *cfg.lens_focal;
      const double apparent = cfg.alpha() * cfg.l2 + cfg.l1;
      return cfg.lambda2 * f * (1.0 + (apparent - f) / (apparent - 2.0 * f)) / d;
    }
    case Scenario::scan_d1:
      return cfg.lambda1 * cfg.l1 / d;
  }
  throw DomainError("unknown scenario");
}

std::optional<std::string> fringe_regime_warning(const ExperimentConfig& cfg, Scenario scenario) {
  std::ostringstream os;
  double width_sq = cfg.gamma_sq();
  double far = 0.0;
  switch (scenario) {
    case Scenario::same_color:
      if (cfg.lambda1 != cfg.lambda2) os << "wavelengths differ; the two-colour width applies. ";
      far = cfg.lambda2 * cfg.total_d() / kPi;
      break;
    case Scenario::two_color:
      far = (cfg.lambda2 * (cfg.l1 + cfg.l2) + cfg.lambda1 * cfg.l2) / kPi;
      break;
    case Scenario::lens:
      far = cfg.lambda2 * (cfg.alpha() * cfg.l2 + cfg.l1) / kPi;
      break;
    case Scenario::scan_d1:
      width_sq = cfg.epsilon * cfg.epsilon;
      far = cfg.lambda1 * cfg.l1 / kPi;
      break;
  }
  if (width_sq > 0.1 * far) os << "packet width^2 " << width_sq << " m^2 is not << lambda L/pi = " << far << " m^2";
  const std::string msg = os.str();
  if (msg.empty()) return std::nullopt;
  return msg;
}

double theta1(const ExperimentConfig& cfg) {
  const double spread = cfg.lambda1 * cfg.l1 / kPi;
  const double e4 = std::pow(cfg.epsilon, 4);
  return 2.0 * cfg.slit_sep * spread / (e4 + spread * spread);
}

double theta2(const ExperimentConfig& cfg) {
  const double path = cfg.lambda2 * (cfg.l1 + cfg.l2) + cfg.lambda1 * cfg.l2;
  const double g2 = cfg.gamma_sq();
  return 2.0 * kPi * cfg.slit_sep * path / (g2 * g2 * kPi * kPi + path * path);
}

// ---------------------------------------------------------------------------

std::vector<double> coincidence_profile(const TwoPhotonState& state, Detector scanning, double fixed_pos,
                                        std::span<const double> zs) {
  std::vector<double> out;
  out.reserve(zs.size());
  for (double z : zs)
    out.push_back(scanning == Detector::d2 ? coincidence_density(state, fixed_pos, z)
                                           : coincidence_density(state, z, fixed_pos));
  return out;
}

std::vector<double> marginal_profile(const TwoPhotonState& state, Detector which, std::span<const double> zs) {
  std::vector<double> out;
  out.reserve(zs.size());
  for (double z : zs) out.push_back(marginal_density(state, which, z));
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw DomainError("linspace needs at least two samples");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  return out;
}

}  // namespace ghost
