#include "ghost/oracle.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ostream>

#include "ghost/errors.hpp"
#include "lsq.hpp"

namespace ghost {

using cplx = std::complex<double>;
using namespace std::complex_literals;

namespace {

struct Extent {
  double half1 = 0.0;
  double half2 = 0.0;
  double dz = 0.0;
};

// Intensity standard deviations of the sampled source after both photons
// flew `flight`: |Psi|^2 = exp(-2 z^T Re(M) z), covariance (4 Re M)^-1.
std::array<double, 2> source_sds(const ExperimentConfig& cfg, double flight) {
  const double s2 = cfg.sigma * cfg.sigma;
  const double a = 1.0 / (4.0 * cfg.omega_cap * cfg.omega_cap);
  const double det0 = 4.0 * a * s2;
  // Inverse of the source quadratic form plus the flight terms.
  cplx c00 = (s2 + a) / det0 + 1i * cfg.lambda1 * flight / kPi;
  cplx c11 = (s2 + a) / det0 + 1i * cfg.lambda2 * flight / kPi;
  const cplx c01 = (s2 - a) / det0;
  const cplx det = c00 * c11 - c01 * c01;
  const double m00 = (c11 / det).real(), m11 = (c00 / det).real(), m01 = (-c01 / det).real();
  const double rdet = 4.0 * (m00 * m11 - m01 * m01);
  return {std::sqrt(m11 / rdet), std::sqrt(m00 / rdet)};
}

Extent required_extent(const ExperimentConfig& cfg, const GridOptions& opts) {
  const double k = opts.envelope_sds;
  const auto src = source_sds(cfg, 0.0);
  const auto flown = source_sds(cfg, cfg.l2);
  const SlitParams sp = conditional_slit_params(cfg);
  const double e2 = cfg.epsilon * cfg.epsilon;

  const GaussianMode slit1 = normalized_mode(cfg.z0(), e2);
  const GaussianMode slit2 = normalized_mode(sp.z0_prime, sp.gamma_cap);
  const GaussianMode det1 = propagate_mode(slit1, cfg.lambda1, cfg.l1);
  const GaussianMode det2 = propagate_mode(slit2, cfg.lambda2, cfg.l1);

  Extent ext;
  ext.half1 = std::max({k * src[0], k * flown[0], cfg.z0() + k * slit1.intensity_sd(),
                        cfg.z0() + k * det1.intensity_sd()});
  ext.half2 = std::max({k * src[1], k * flown[1], sp.z0_prime + k * slit2.intensity_sd(),
                        sp.z0_prime + k * det2.intensity_sd()});
  ext.dz = std::min(cfg.epsilon / opts.samples_per_epsilon, 1.0 / (3.0 * cfg.sigma));
  return ext;
}

int next_pow2(double x) {
  int n = 64;
  while (n < x) n <<= 1;
  return n;
}

bool fits(const ExperimentConfig& cfg, const GridOptions& opts) {
  const Extent e = required_extent(cfg, opts);
  return 2.0 * e.half1 / e.dz <= opts.max_samples && 2.0 * e.half2 / e.dz <= opts.max_samples;
}

std::vector<double> slice_closed_form(const TwoPhotonState& state, const std::vector<double>& z2) {
  return coincidence_profile(state, Detector::d2, 0.0, z2);
}

std::optional<double> try_width(const Profile1D& p, double expected) {
  FringeOptions opts;
  opts.expected_period = expected;
  const auto rep = extract_fringe_width(p, opts);
  if (!rep) return std::nullopt;
  return rep->fringe_width;
}

}  // namespace

GridSpec plan_grid(const ExperimentConfig& cfg, const GridOptions& opts) {
  cfg.validate();
  const Extent e = required_extent(cfg, opts);
  const double need1 = 2.0 * e.half1 / e.dz;
  const double need2 = 2.0 * e.half2 / e.dz;
  if (need1 > opts.max_samples || need2 > opts.max_samples)
    throw ResolutionError("grid needs " + std::to_string(static_cast<long>(std::ceil(std::max(need1, need2)))) +
                          " samples per axis, more than the cap of " + std::to_string(opts.max_samples));
  const int n1 = next_pow2(need1);
  const int n2 = next_pow2(need2);
  return GridSpec::symmetric(0.5 * n1 * e.dz, n1, 0.5 * n2 * e.dz, n2);
}

ExperimentConfig scaled_config(const ExperimentConfig& cfg, const GridOptions& opts) {
  constexpr double transverse = 0.1;
  constexpr double longitudinal = transverse * transverse;
  ExperimentConfig s = cfg;
  s.epsilon *= transverse;
  s.slit_sep *= transverse;
  s.sigma /= transverse;
  s.omega_cap *= transverse;
  s.scan.z_min *= transverse;
  s.scan.z_max *= transverse;
  s.fixed_pos *= transverse;
  s.l1 *= longitudinal;
  s.l2 *= longitudinal;
  if (s.lens_focal) *s.lens_focal *= longitudinal;
  s.validate();
  if (fits(s, opts)) return s;

  // Largest Omega that still fits, by bisection on a log scale.
  double lo = 2.0 * std::max(s.epsilon, 1.0 / s.sigma);
  double hi = s.omega_cap;
  s.omega_cap = lo;
  if (!fits(s, opts)) throw ResolutionError("scaled geometry does not fit the grid even for a small Omega");
  for (int i = 0; i < 60; ++i) {
    const double mid = std::sqrt(lo * hi);
    s.omega_cap = mid;
    (fits(s, opts) ? lo : hi) = mid;
  }
  s.omega_cap = lo;
  return s;
}

GridRun run_grid_pipeline(const ExperimentConfig& cfg, const GridSpec& spec) {
  GridRun run;
  SlitProjection proj;
  {
    WavefunctionGrid g = grid_initial_state(cfg.sigma, cfg.omega_cap, spec);
    run.source_raw_norm = g.audit.front().norm;
    g = grid_propagate(g, Detector::d1, cfg.lambda1, cfg.l2);
    g = grid_propagate(g, Detector::d2, cfg.lambda2, cfg.l2);
    proj = grid_slit_projection(g, cfg.slit_sep, cfg.epsilon);
  }
  run.discarded = proj.discarded;
  run.psi_a = std::move(proj.psi_a);
  run.z2.resize(static_cast<std::size_t>(spec.n2));
  for (int i = 0; i < spec.n2; ++i) run.z2[static_cast<std::size_t>(i)] = spec.z2(i);

  WavefunctionGrid g = grid_propagate(proj.grid, Detector::d1, cfg.lambda1, cfg.l1);
  proj.grid.values = {};
  run.detector = grid_propagate(g, Detector::d2, cfg.lambda2, cfg.l1);
  return run;
}

GaussianFit fit_complex_gaussian(std::span<const double> z, std::span<const cplx> psi) {
  if (z.size() != psi.size() || z.size() < 8) throw AnalysisError("Gaussian fit needs matching samples");
  double peak = 0.0;
  std::size_t ipk = 0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (std::abs(psi[i]) > peak) {
      peak = std::abs(psi[i]);
      ipk = i;
    }
  // Contiguous run around the peak above 1e-3 of it.
  std::size_t lo = ipk, hi = ipk;
  while (lo > 0 && std::abs(psi[lo - 1]) > 1e-3 * peak) --lo;
  while (hi + 1 < psi.size() && std::abs(psi[hi + 1]) > 1e-3 * peak) ++hi;
  if (hi - lo < 8) throw AnalysisError("Gaussian fit window too narrow");

  const double origin = z[ipk];
  const double scale = z[hi] - z[lo];
  std::vector<double> x, mag, phase, w;
  double unwrap = std::arg(psi[lo]);
  for (std::size_t i = lo; i <= hi; ++i) {
    if (i > lo) {
      double step = std::arg(psi[i]) - std::arg(psi[i - 1]);
      step -= 2.0 * kPi * std::round(step / (2.0 * kPi));
      unwrap += step;
    }
    const double a = std::abs(psi[i]) / peak;
    x.push_back((z[i] - origin) / scale);
    mag.push_back(std::log(a));
    phase.push_back(unwrap);
    w.push_back(a * a);
  }
  const auto re = detail::fit_quadratic(x, mag, w);
  const auto im = detail::fit_quadratic(x, phase, w);
  const cplx c2 = cplx(re[2], im[2]) / (scale * scale);
  const cplx c1 = cplx(re[1], im[1]) / scale - 2.0 * c2 * origin;
  const cplx width = -1.0 / c2;
  return {0.5 * c1 * width, width};
}

std::vector<double> exact_projection_profile(const ExperimentConfig& cfg, std::span<const double> z2) {
  const ExactSlitParams e = exact_slit_params(cfg);
  const cplx width = e.gamma_cap + 1i * cfg.lambda2 * cfg.l1 / kPi;
  std::vector<double> out;
  out.reserve(z2.size());
  // Photon 1 contributes the same factor to both terms at z1 = 0.
  for (double z : z2) {
    const cplx a = std::exp(-(z - e.center) * (z - e.center) / width);
    const cplx b = std::exp(-(z + e.center) * (z + e.center) / width);
    out.push_back(std::norm(a + b));
  }
  return out;
}

ComparisonReport compare_oracle(const ExperimentConfig& cfg, bool scaled, const GridOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  ComparisonReport rep;
  rep.cfg = scaled ? scaled_config(cfg, opts) : cfg;
  rep.cfg.validate();
  rep.scaled = scaled;
  rep.grid = plan_grid(rep.cfg, opts);

  GridRun run = run_grid_pipeline(rep.cfg, rep.grid);
  rep.oracle = grid_slice(run.detector, Detector::d1, 0.0);
  rep.audit = run.detector.audit;
  rep.discarded = run.discarded;
  rep.source_raw_norm = run.source_raw_norm;
  rep.slit_fit = fit_complex_gaussian(run.z2, run.psi_a);
  run.detector.values = {};

  rep.slit_formula = conditional_slit_params(rep.cfg);
  rep.slit_exact = exact_slit_params(rep.cfg);
  const TwoPhotonState state = detector_state(rep.cfg);
  rep.closed_form.positions = rep.oracle.positions;
  rep.closed_form.values = slice_closed_form(state, rep.oracle.positions);

  double peak = 0.0, diff_max = 0.0, diff_sq = 0.0, ref_sq = 0.0;
  for (std::size_t i = 0; i < rep.oracle.size(); ++i) {
    const double g = rep.oracle.values[i];
    const double c = rep.closed_form.values[i];
    peak = std::max(peak, g);
    diff_max = std::max(diff_max, std::abs(c - g));
    diff_sq += (c - g) * (c - g);
    ref_sq += g * g;
  }
  rep.linf_rel = diff_max / peak;
  rep.l2_rel = std::sqrt(diff_sq / ref_sq);

  const auto exact = exact_projection_profile(rep.cfg, rep.oracle.positions);
  const double exact_peak = *std::max_element(exact.begin(), exact.end());
  for (std::size_t i = 0; i < exact.size(); ++i)
    rep.exact_linf_rel = std::max(rep.exact_linf_rel, std::abs(rep.oracle.values[i] / peak - exact[i] / exact_peak));

  rep.width_analytic = analytic_fringe_width(rep.cfg, Scenario::two_color);
  rep.width_closed = try_width(rep.closed_form, rep.width_analytic);
  rep.width_oracle = try_width(rep.oracle, rep.width_analytic);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

void write_report(std::ostream& os, const ComparisonReport& rep) {
  const auto& c = rep.cfg;
  os.precision(10);
  os << "scaled: " << (rep.scaled ? "true" : "false") << '\n'
     << "lambda1_m: " << c.lambda1 << '\n'
     << "lambda2_m: " << c.lambda2 << '\n'
     << "sigma_per_m: " << c.sigma << '\n'
     << "omega_m: " << c.omega_cap << '\n'
     << "epsilon_m: " << c.epsilon << '\n'
     << "d_m: " << c.slit_sep << '\n'
     << "L1_m: " << c.l1 << '\n'
     << "L2_m: " << c.l2 << '\n'
     << "grid_n1: " << rep.grid.n1 << '\n'
     << "grid_n2: " << rep.grid.n2 << '\n'
     << "grid_dz1_m: " << rep.grid.dz1() << '\n'
     << "grid_dz2_m: " << rep.grid.dz2() << '\n'
     << "profile_linf_rel_error: " << rep.linf_rel << '\n'
     << "profile_l2_rel_error: " << rep.l2_rel << '\n'
     << "profile_linf_rel_error_vs_exact_projection: " << rep.exact_linf_rel << '\n'
     << "fringe_width_analytic_m: " << rep.width_analytic << '\n';
  auto width = [&](const char* key, const std::optional<double>& w) {
    os << key << ": ";
    if (w) os << *w; else os << "no fringes";
    os << '\n';
  };
  width("fringe_width_closed_form_m", rep.width_closed);
  width("fringe_width_oracle_m", rep.width_oracle);
  if (rep.width_closed && rep.width_oracle) os << "fringe_width_ratio: " << *rep.width_closed / *rep.width_oracle << '\n';
  os << "discarded_norm_fraction: " << rep.discarded << '\n'
     << "source_norm_closed_form_prefactor: " << rep.source_raw_norm << '\n'
     << "z0_prime_formula_m: " << rep.slit_formula.z0_prime << '\n'
     << "z0_prime_exact_m: " << rep.slit_exact.center.real() << " + " << rep.slit_exact.center.imag() << "i\n"
     << "z0_prime_oracle_fit_m: " << rep.slit_fit.center.real() << " + " << rep.slit_fit.center.imag() << "i\n"
     << "gamma_formula_m2: " << rep.slit_formula.gamma_cap.real() << " + " << rep.slit_formula.gamma_cap.imag() << "i\n"
     << "gamma_exact_m2: " << rep.slit_exact.gamma_cap.real() << " + " << rep.slit_exact.gamma_cap.imag() << "i\n"
     << "gamma_oracle_fit_m2: " << rep.slit_fit.width.real() << " + " << rep.slit_fit.width.imag() << "i\n";
  for (const auto& a : rep.audit) os << "norm_audit[" << a.stage << "]: " << a.norm << '\n';
  os << "runtime_s: " << rep.seconds << '\n';
}

void write_profiles_csv(std::ostream& os, const ComparisonReport& rep) {
  os.precision(12);
  os << "z_m,closed_form_per_m2,oracle_per_m2\n";
  for (std::size_t i = 0; i < rep.oracle.size(); ++i)
    os << rep.oracle.positions[i] << ',' << rep.closed_form.values[i] << ',' << rep.oracle.values[i] << '\n';
}

}  // namespace ghost
