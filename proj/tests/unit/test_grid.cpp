#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ghost/errors.hpp"
#include "ghost/gaussian.hpp"
#include "ghost/grid.hpp"

namespace ghost {
namespace {

using namespace std::complex_literals;

constexpr double kLambda = 780e-9;

// Product state g(z1) h(z2) sampled on `spec`.
WavefunctionGrid product_grid(const GridSpec& spec, const GaussianMode& g, const GaussianMode& h) {
  WavefunctionGrid w{spec, std::vector<cplx>(spec.size()), {}};
  for (int i1 = 0; i1 < spec.n1; ++i1)
    for (int i2 = 0; i2 < spec.n2; ++i2) w.at(i1, i2) = g(spec.z1(i1)) * h(spec.z2(i2));
  return w;
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (auto x : v) m = std::max(m, std::abs(x));
  return m;
}

// Moments of |Psi|^2: {<z1>, <z2>, var1, var2, cov}.
std::array<double, 5> moments(const WavefunctionGrid& g) {
  double m0 = 0, m1 = 0, m2 = 0, m11 = 0, m22 = 0, m12 = 0;
  for (int i1 = 0; i1 < g.spec.n1; ++i1)
    for (int i2 = 0; i2 < g.spec.n2; ++i2) {
      const double p = std::norm(g.at(i1, i2));
      const double a = g.spec.z1(i1), b = g.spec.z2(i2);
      m0 += p, m1 += p * a, m2 += p * b, m11 += p * a * a, m22 += p * b * b, m12 += p * a * b;
    }
  const double e1 = m1 / m0, e2 = m2 / m0;
  return {e1, e2, m11 / m0 - e1 * e1, m22 / m0 - e2 * e2, m12 / m0 - e1 * e2};
}

// Source: sigma = 1/(50 um), Omega = 0.5 mm, fully inside a 256^2 window.
constexpr double kSigma = 2e4;
constexpr double kOmega = 5e-4;
GridSpec source_spec() { return GridSpec::symmetric(1.6e-3, 256, 1.6e-3, 256); }

// ---------------------------------------------------------------------------

TEST(GridSpec, RejectsNonPowerOfTwoAndTinyGrids) {
  EXPECT_THROW(GridSpec::symmetric(1e-3, 100, 1e-3, 128).validate(), ResolutionError);
  EXPECT_THROW(GridSpec::symmetric(1e-3, 32, 1e-3, 32).validate(), ResolutionError);
  EXPECT_NO_THROW(GridSpec::symmetric(1e-3, 64, 1e-3, 128).validate());
}

TEST(GridSpec, ZeroIsASample) {
  const GridSpec s = GridSpec::symmetric(1e-3, 64, 2e-3, 128);
  EXPECT_EQ(s.z1(32), 0.0);
  EXPECT_EQ(s.z2(64), 0.0);
}

TEST(GridInitialState, NormalizedWithPrefactorNormAudited) {
  const WavefunctionGrid g = grid_initial_state(kSigma, kOmega, source_spec());
  EXPECT_NEAR(g.norm(), 1.0, 1e-12);
  ASSERT_GE(g.audit.size(), 2u);
  EXPECT_NEAR(g.audit.front().norm, 0.5, 1e-6);
  EXPECT_NEAR(g.audit.back().norm, 1.0, 1e-12);
}

TEST(GridInitialState, ClippedEnvelopeRejected) {
  EXPECT_THROW(grid_initial_state(kSigma, kOmega, GridSpec::symmetric(0.5e-3, 256, 0.5e-3, 256)), ClippingError);
}

TEST(GridInitialState, PositionsArePositivelyCorrelated) {
  const auto m = moments(grid_initial_state(kSigma, kOmega, source_spec()));
  const double pearson = m[4] / std::sqrt(m[2] * m[3]);
  EXPECT_GT(pearson, 0.99);
}

TEST(GridInitialState, MarginalVarianceIsAQuarterOfDeltaZSquared) {
  const auto m = moments(grid_initial_state(kSigma, kOmega, source_spec()));
  const double dz2 = kOmega * kOmega + 1.0 / (4.0 * kSigma * kSigma);
  EXPECT_NEAR(m[2] / (dz2 / 4.0), 1.0, 1e-6);
  EXPECT_NEAR(m[3] / (dz2 / 4.0), 1.0, 1e-6);
}

// ---------------------------------------------------------------------------

// z1: waist 50 um on 64 samples; z2: same waist on a window wide enough for flight.
GridSpec flight_spec() { return GridSpec::symmetric(0.4e-3, 64, 8e-3, 1024); }
GaussianMode waist() { return normalized_mode(0.0, 1e-8); }

TEST(GridPropagate, ZeroDistanceIsIdentity) {
  const WavefunctionGrid g = product_grid(flight_spec(), waist(), waist());
  const WavefunctionGrid p = grid_propagate(g, Detector::d2, kLambda, 0.0);
  EXPECT_EQ(p.values, g.values);
}

TEST(GridPropagate, MatchesClosedFormMode) {
  const GaussianMode g = waist();
  const GaussianMode h = normalized_mode(3e-4, 1e-8);
  const GridSpec s = flight_spec();
  const WavefunctionGrid p = grid_propagate(product_grid(s, g, h), Detector::d2, kLambda, 0.5);
  const WavefunctionGrid expect = product_grid(s, g, propagate_mode(h, kLambda, 0.5));
  std::vector<cplx> diff(p.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = p.values[i] - expect.values[i];
  EXPECT_LE(max_abs(diff) / max_abs(expect.values), 1e-6);
}

TEST(GridPropagate, NormDriftOverFourSteps) {
  WavefunctionGrid g = product_grid(flight_spec(), waist(), waist());
  const double n0 = g.norm();
  for (int i = 0; i < 4; ++i) g = grid_propagate(g, Detector::d2, kLambda, 0.1);
  EXPECT_NEAR(g.norm() / n0, 1.0, 1e-10);
  EXPECT_EQ(g.audit.size(), 4u);
}

TEST(GridPropagate, AliasingDetected) {
  const WavefunctionGrid g = product_grid(flight_spec(), waist(), waist());
  EXPECT_THROW(grid_propagate(g, Detector::d2, kLambda, 50.0), ResolutionError);
}

// A tilted packet that would land beyond the window: the kernel phase step is
// pi times landing position over window half-width, so it is caught as aliasing.
TEST(GridPropagate, PacketLeavingWindowRejected) {
  const GridSpec s = GridSpec::symmetric(0.4e-3, 64, 1e-3, 256);
  const double dist = 0.05;
  WavefunctionGrid g = product_grid(s, waist(), waist());
  for (double drift : {0.3e-3, 1e-3}) {
    const double k0 = 2 * kPi * drift / (kLambda * dist);
    WavefunctionGrid t = g;
    for (int i1 = 0; i1 < s.n1; ++i1)
      for (int i2 = 0; i2 < s.n2; ++i2) t.at(i1, i2) *= std::polar(1.0, k0 * s.z2(i2));
    if (drift < 0.5e-3)
      EXPECT_NO_THROW(grid_propagate(t, Detector::d2, kLambda, dist));
    else
      EXPECT_THROW(grid_propagate(t, Detector::d2, kLambda, dist), ResolutionError);
  }
}

// ---------------------------------------------------------------------------

constexpr double kEps = 2e-5;
constexpr double kSep = 1e-4;
GridSpec slit_spec() { return GridSpec::symmetric(0.32e-3, 256, 1e-3, 64); }

TEST(GridSlitProjection, IdempotentOnTwoSlitStates) {
  const GridSpec s = slit_spec();
  const GaussianMode pa = normalized_mode(0.5 * kSep, kEps * kEps);
  const GaussianMode pb = normalized_mode(-0.5 * kSep, kEps * kEps);
  const GaussianMode qa = normalized_mode(1e-4, 1e-8 + 2e-8i);
  const GaussianMode qb = normalized_mode(-1e-4, 1e-8 + 2e-8i);
  WavefunctionGrid in = product_grid(s, pa, qa);
  const WavefunctionGrid other = product_grid(s, pb, qb);
  for (std::size_t i = 0; i < in.values.size(); ++i) in.values[i] += other.values[i];
  const double scale = 1.0 / std::sqrt(in.norm());
  for (auto& v : in.values) v *= scale;

  const SlitProjection out = grid_slit_projection(in, kSep, kEps);
  std::vector<cplx> diff(in.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = out.grid.values[i] - in.values[i];
  // The two slit modes overlap by exp(-d^2 / 2 eps^2), so the sum of their
  // rank-one projectors is idempotent only up to that overlap.
  const double overlap = std::exp(-kSep * kSep / (2 * kEps * kEps));
  EXPECT_LE(max_abs(diff) / max_abs(in.values), 2 * overlap);
  EXPECT_NEAR(out.discarded, 0.0, 2 * overlap);
}

TEST(GridSlitProjection, OutputHumpsSitAtSlitsWithHalfEpsilonSpread) {
  const GridSpec s = slit_spec();
  const WavefunctionGrid in = product_grid(s, normalized_mode(0.0, 1e-8), normalized_mode(0.0, 1e-8));
  const SlitProjection out = grid_slit_projection(in, kSep, kEps);
  double m0 = 0, m1 = 0, m2 = 0;
  for (int i1 = 0; i1 < s.n1; ++i1) {
    const double z = s.z1(i1);
    if (z <= 0.0) continue;
    double p = 0;
    for (int i2 = 0; i2 < s.n2; ++i2) p += std::norm(out.grid.at(i1, i2));
    m0 += p, m1 += p * z, m2 += p * z * z;
  }
  const double mean = m1 / m0;
  EXPECT_NEAR(mean, 0.5 * kSep, 1e-3 * kSep);
  // 1/e half-width eps/sqrt(2) of the intensity, i.e. standard deviation eps/2.
  EXPECT_NEAR(std::sqrt(m2 / m0 - mean * mean), 0.5 * kEps, 1e-3 * kEps);
}

TEST(GridSlitProjection, NeverIncreasesNorm) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GridSpec s = slit_spec();
  for (int trial = 0; trial < 5; ++trial) {
    WavefunctionGrid g{s, std::vector<cplx>(s.size()), {}};
    for (auto& v : g.values) v = cplx(u(rng), u(rng));
    const double scale = 1.0 / std::sqrt(g.norm());
    for (auto& v : g.values) v *= scale;
    const SlitProjection out = grid_slit_projection(g, kSep, kEps);
    const auto& kept = out.grid.audit[out.grid.audit.size() - 2];
    EXPECT_EQ(kept.stage, "slit projection (kept)");
    EXPECT_LE(kept.norm, 1.0 + 1e-12);
    EXPECT_GE(out.discarded, -1e-12);
  }
}

TEST(GridSlitProjection, FullyBlockedStateRejected) {
  const GridSpec s = slit_spec();
  const WavefunctionGrid g = product_grid(s, normalized_mode(2.5e-4, 1e-10), waist());
  EXPECT_THROW(grid_slit_projection(g, kSep, kEps), DomainError);
}

TEST(GridSlitProjection, UnresolvedSlitRejected) {
  const WavefunctionGrid g = product_grid(GridSpec::symmetric(0.32e-3, 64, 1e-3, 64), waist(), waist());
  EXPECT_THROW(grid_slit_projection(g, kSep, kEps), ResolutionError);
}

// ---------------------------------------------------------------------------

TEST(GridLens, InfiniteFocalLengthIsIdentity) {
  const WavefunctionGrid g = product_grid(flight_spec(), waist(), waist());
  const WavefunctionGrid l = grid_lens(g, Detector::d2, std::numeric_limits<double>::infinity(), kLambda);
  std::vector<cplx> diff(g.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = l.values[i] - g.values[i];
  EXPECT_LE(max_abs(diff), 1e-10 * max_abs(g.values));
}

TEST(GridLens, TwoFTwoFImagingRestoresWaist) {
  const double f = 0.05, w2 = 1e-8;
  const GridSpec s = GridSpec::symmetric(0.4e-3, 64, 3.2e-3, 512);
  WavefunctionGrid g = product_grid(s, waist(), normalized_mode(0.0, w2));
  g = grid_propagate(g, Detector::d2, kLambda, 2 * f);
  g = grid_lens(g, Detector::d2, f, kLambda);
  EXPECT_NEAR(g.norm(), 1.0, 1e-10);
  g = grid_propagate(g, Detector::d2, kLambda, 2 * f);
  const auto m = moments(g);
  EXPECT_NEAR(std::sqrt(m[3]) / (0.5 * std::sqrt(w2)), 1.0, 1e-4);
}

TEST(GridLens, ImagePlaneIntensityMatchesClosedForm) {
  const double f = 0.05, w2 = 1e-8, L = 0.08;
  const GridSpec s = GridSpec::symmetric(0.4e-3, 64, 3.2e-3, 512);
  const GaussianMode h = normalized_mode(0.0, w2);
  WavefunctionGrid g = product_grid(s, waist(), h);
  g = grid_propagate(g, Detector::d2, kLambda, L);
  g = grid_lens(g, Detector::d2, f, kLambda);

  GaussianMode c = lens_transform_mode(propagate_mode(h, kLambda, L), f, L, kLambda);
  const double u = -c.width.imag() / (kLambda / kPi);
  EXPECT_NEAR(1.0 / u, 1.0 / f - 1.0 / L, 1e-9 / f);
  c = propagate_mode(c, kLambda, u);
  g = grid_propagate(g, Detector::d2, kLambda, u);

  const GaussianMode g1 = waist();
  double worst = 0.0, peak = 0.0;
  for (int i1 = 0; i1 < s.n1; ++i1)
    for (int i2 = 0; i2 < s.n2; ++i2) {
      const double want = std::norm(g1(s.z1(i1)) * c(s.z2(i2)));
      worst = std::max(worst, std::abs(std::norm(g.at(i1, i2)) - want));
      peak = std::max(peak, want);
    }
  EXPECT_LE(worst / peak, 1e-4);
}

// ---------------------------------------------------------------------------

TEST(GridCoincidence, NonNegativeAndNormalized) {
  const WavefunctionGrid g = grid_initial_state(kSigma, kOmega, source_spec());
  const auto p = grid_coincidence(g);
  double total = 0.0;
  for (double v : p) {
    EXPECT_GE(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total * g.spec.dz1() * g.spec.dz2(), 1.0, 1e-6);
}

TEST(GridSlice, NearestSampleAndParity) {
  const WavefunctionGrid g = grid_initial_state(kSigma, kOmega, source_spec());
  const Profile1D p = grid_slice(g, Detector::d1, 0.0);
  ASSERT_EQ(p.size(), static_cast<std::size_t>(g.spec.n2));
  const std::size_t n = p.size();
  for (std::size_t i = 1; i < n; ++i) EXPECT_NEAR(p.values[i], p.values[n - i], 1e-8 * p.values[n / 2]);
  EXPECT_THROW(grid_slice(g, Detector::d1, 1.0), DomainError);
}

}  // namespace
}  // namespace ghost
