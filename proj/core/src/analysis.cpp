#include "ghost/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fft.hpp"
#include "lsq.hpp"
#include "ghost/errors.hpp"

namespace ghost {

namespace {

constexpr double kTwoPi = 6.283185307179586;

void check_spacing(const std::vector<double>& z) {
  const double step = z[1] - z[0];
  if (!(step > 0.0)) throw AnalysisError("profile positions must be increasing");
  for (std::size_t i = 1; i < z.size(); ++i)
    if (std::abs((z[i] - z[i - 1]) - step) > 1e-6 * step) throw AnalysisError("profile spacing is not uniform");
}

std::vector<double> moving_average(const std::vector<double>& y, int width) {
  const int half = std::max(width, 1) / 2;
  const int n = static_cast<int>(y.size());
  std::vector<double> out(y.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += y[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / (hi - lo + 1);
  }
  return out;
}

struct Envelope {
  double mean;
  double sd;
  std::array<double, 3> log_coeffs;  // in the scaled coordinate
  double origin;
  double scale;

  double operator()(double z) const {
    const double x = (z - origin) / scale;
    return std::exp(log_coeffs[0] + x * (log_coeffs[1] + x * log_coeffs[2]));
  }
};

// Gaussian envelope from a y^2-weighted fit of log(y) (weights tame the log
// near fringe minima and in the tails).
Envelope fit_envelope(const Profile1D& p, const std::vector<double>& smooth) {
  const double peak = *std::max_element(smooth.begin(), smooth.end());
  const double origin = p.centroid();
  const double scale = p.positions.back() - p.positions.front();
  std::vector<double> x, ly, w;
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    if (smooth[i] <= 1e-6 * peak) continue;
    x.push_back((p.positions[i] - origin) / scale);
    ly.push_back(std::log(smooth[i] / peak));
    w.push_back((smooth[i] / peak) * (smooth[i] / peak));
  }
  if (x.size() < 8) throw AnalysisError("profile has too few significant samples for an envelope fit");
  auto c = detail::fit_quadratic(x, ly, w);
  if (!(c[2] < 0.0)) throw AnalysisError("profile has no peaked envelope");
  c[0] += std::log(peak);
  const double mean = origin - scale * c[1] / (2.0 * c[2]);
  const double sd = scale * std::sqrt(-1.0 / (2.0 * c[2]));
  return {mean, sd, c, origin, scale};
}

// Least-squares fit of e to a quadratic trend plus b cos(k z) + c sin(k z);
// returns the negated residual sum of squares, so larger is better. Fitting the
// trend jointly avoids the frequency bias a separate detrend causes when only a
// few periods are available.
double sinusoid_power(std::span<const double> z, std::span<const double> e, double freq, double span) {
  constexpr int kB = 5;
  std::array<double, kB * kB> m{};
  std::array<double, kB> r{};
  double ee = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double ph = kTwoPi * freq * z[i];
    const double u = z[i] / span;
    const std::array<double, kB> basis{1.0, u, u * u, std::cos(ph), std::sin(ph)};
    for (int a = 0; a < kB; ++a) {
      r[static_cast<std::size_t>(a)] += basis[static_cast<std::size_t>(a)] * e[i];
      for (int b = 0; b < kB; ++b)
        m[static_cast<std::size_t>(kB * a + b)] += basis[static_cast<std::size_t>(a)] * basis[static_cast<std::size_t>(b)];
    }
    ee += e[i] * e[i];
  }
  // Gaussian elimination with partial pivoting.
  std::array<double, kB> sol = r;
  auto at = [&](int row, int col) -> double& { return m[static_cast<std::size_t>(kB * row + col)]; };
  for (int col = 0; col < kB; ++col) {
    int piv = col;
    for (int row = col + 1; row < kB; ++row)
      if (std::abs(at(row, col)) > std::abs(at(piv, col))) piv = row;
    if (std::abs(at(piv, col)) < 1e-300) return -ee;
    if (piv != col) {
      for (int k = 0; k < kB; ++k) std::swap(at(piv, k), at(col, k));
      std::swap(sol[static_cast<std::size_t>(piv)], sol[static_cast<std::size_t>(col)]);
    }
    for (int row = col + 1; row < kB; ++row) {
      const double f = at(row, col) / at(col, col);
      for (int k = col; k < kB; ++k) at(row, k) -= f * at(col, k);
      sol[static_cast<std::size_t>(row)] -= f * sol[static_cast<std::size_t>(col)];
    }
  }
  for (int row = kB - 1; row >= 0; --row) {
    double s = sol[static_cast<std::size_t>(row)];
    for (int k = row + 1; k < kB; ++k) s -= at(row, k) * sol[static_cast<std::size_t>(k)];
    sol[static_cast<std::size_t>(row)] = s / at(row, row);
  }
  double explained = 0.0;
  for (int a = 0; a < kB; ++a) explained += sol[static_cast<std::size_t>(a)] * r[static_cast<std::size_t>(a)];
  return explained - ee;
}

double golden_max(auto&& fn, double lo, double hi, int iters) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = fn(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

double central_fringe_visibility(const Profile1D& p, double center) {
  const auto& y = p.values;
  const std::size_t n = y.size();
  std::size_t best = n;
  double best_dist = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (y[i] >= y[i - 1] && y[i] >= y[i + 1] && y[i] > 0.0) {
      const double dist = std::abs(p.positions[i] - center);
      if (best == n || dist < best_dist) {
        best = i;
        best_dist = dist;
      }
    }
  }
  if (best == n) return 0.0;
  std::size_t left = best, right = best;
  while (left > 0 && y[left - 1] <= y[left]) --left;
  while (right + 1 < n && y[right + 1] <= y[right]) ++right;
  const double lo = 0.5 * (y[left] + y[right]);
  const double v = (y[best] - lo) / (y[best] + lo);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

void Profile1D::validate() const {
  if (positions.size() != values.size()) throw AnalysisError("profile positions and values differ in length");
  if (values.size() < 64) throw AnalysisError("profile needs at least 64 samples");
  check_spacing(positions);
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0) throw AnalysisError("profile values must be finite and non-negative");
}

double Profile1D::centroid() const {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    m0 += values[i];
    m1 += values[i] * positions[i];
  }
  if (!(m0 > 0.0)) throw AnalysisError("profile is identically zero");
  return m1 / m0;
}

std::optional<FringeReport> extract_fringe_width(const Profile1D& p, const FringeOptions& opts) {
  p.validate();
  const double dz = p.spacing();

  int kernel = 5;
  if (opts.expected_period) kernel = std::max(1, static_cast<int>(std::lround(*opts.expected_period / (8.0 * dz))));
  if (kernel % 2 == 0) ++kernel;
  const auto smooth = moving_average(p.values, kernel);
  const Envelope env = fit_envelope(p, smooth);

  // Envelope-normalized signal inside the analysis window.
  std::vector<double> z, r;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p.positions[i] - env.mean) > opts.window_sds * env.sd) continue;
    z.push_back(p.positions[i] - env.mean);
    r.push_back(p.values[i] / env(p.positions[i]));
  }
  if (z.size() < 32) throw AnalysisError("envelope window holds fewer than 32 samples");
  const double span = z.back() - z.front() + dz;

  // Remove the slow trend the envelope model leaves behind.
  const std::vector<double> ones(z.size(), 1.0);
  std::vector<double> zs(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) zs[i] = z[i] / span;
  const auto trend = detail::fit_quadratic(zs, r, ones);
  std::vector<double> e(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) e[i] = r[i] - (trend[0] + zs[i] * (trend[1] + zs[i] * trend[2]));

  // Hann-windowed, 16x zero-padded spectrum.
  const std::size_t m = e.size();
  std::vector<double> windowed(m);
  double wsum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(m - 1)));
    windowed[i] = w * e[i];
    wsum += w;
  }
  std::size_t nfft = 1;
  while (nfft < 16 * m) nfft <<= 1;
  const std::size_t pad = nfft / m;
  const auto spec = detail::real_spectrum(windowed, nfft);
  std::vector<double> mag(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) mag[k] = std::abs(spec[k]);

  // Ignore the lowest frequencies: detrending and the window leak there.
  const double df = 1.0 / (static_cast<double>(nfft) * dz);
  const auto kmin = static_cast<std::size_t>(std::ceil(1.5 / (span * df)));
  if (kmin + 2 >= mag.size()) throw AnalysisError("analysis window too short for a spectrum");
  std::size_t kpk = kmin;
  for (std::size_t k = kmin; k + 1 < mag.size(); ++k)
    if (mag[k] > mag[kpk]) kpk = k;

  std::vector<double> coarse;
  for (std::size_t k = pad; k < mag.size(); k += pad) coarse.push_back(mag[k]);
  std::nth_element(coarse.begin(), coarse.begin() + static_cast<std::ptrdiff_t>(coarse.size() / 2), coarse.end());
  const double floor = coarse[coarse.size() / 2];
  const double amplitude = 2.0 * mag[kpk] / wsum;
  if (mag[kpk] < 3.0 * floor || amplitude < opts.min_modulation) return std::nullopt;

  // Three-point parabolic interpolation, then a least-squares sinusoid refinement.
  const double a = mag[kpk - 1], b = mag[kpk], c = mag[kpk + 1];
  const double denom = a - 2.0 * b + c;
  const double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
  const double f0 = (static_cast<double>(kpk) + delta) * df;
  const double bin = 1.0 / span;
  const double freq = golden_max([&](double f) { return sinusoid_power(z, r, f, span); }, std::max(f0 - 0.5 * bin, 0.5 * bin),
                                 f0 + 0.5 * bin, 80);

  const double width = 1.0 / freq;
  if (!(width > 2.0 * dz)) throw AnalysisError("fringe period is not resolved by the sampling");
  const double periods = span * freq;
  if (periods < 3.0) throw AnalysisError("fewer than three fringe periods inside the envelope");

  FringeReport rep;
  rep.fringe_width = width;
  rep.envelope_width = env.sd;
  rep.n_fringes_resolved = static_cast<int>(std::floor(periods));
  rep.visibility = central_fringe_visibility(p, env.mean);
  return rep;
}

double visibility(const Profile1D& p, double window) {
  p.validate();
  const double c = p.centroid();
  std::vector<double> y;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::abs(p.positions[i] - c) <= 0.5 * window) y.push_back(p.values[i]);
  if (y.empty()) throw AnalysisError("visibility window contains no samples");

  int extrema = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const bool peak = y[i] > y[i - 1] && y[i] >= y[i + 1];
    const bool dip = y[i] < y[i - 1] && y[i] <= y[i + 1];
    if (peak || dip) ++extrema;
  }
  if (extrema < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi + *lo <= 0.0) return 0.0;
  return std::clamp((*hi - *lo) / (*hi + *lo), 0.0, 1.0);
}

}  // namespace ghost
