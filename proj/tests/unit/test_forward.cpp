#include "ewr/analysis.hpp"
#include "ewr/errors.hpp"
#include "ewr/forward.hpp"
#include "ewr/spectral.hpp"
#include "ewr/wcc.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ewr;
using ewr::test::max_diff;

namespace {

ComplexField plane_wave(const GridSpec& s) {
  ComplexField psi(s, Space::Fourier);
  psi[0] = s.extent_nm * s.extent_nm;
  return psi;
}

cplx at_negated(const ComplexField& f, std::size_t i) {
  const GridSpec& s = f.spec();
  return f(s.wrap(-s.signed_index(i / s.n)), s.wrap(-s.signed_index(i % s.n)));
}

}  // namespace

TEST(SimulateImage, PlaneWaveGivesUnitImage) {
  const OpticalParams p;
  const GridSpec s{32, 0.3};
  const auto k = build_factorized_kernel(s, 5.0, p, 1);
  const RealField img = simulate_image_real(plane_wave(s), k);
  for (double v : img.values()) EXPECT_NEAR(v, 1.0, 1e-12);
  const ComplexField G = simulate_image(ComplexField(s, Space::Fourier), k);
  EXPECT_EQ(max_abs(G), 0.0);
}

TEST(SimulateImage, MatchesDirectOracleWithIshizukaTable) {
  const OpticalParams p;
  const GridSpec s{8, 0.06};
  const ComplexField psi = random_wave(s, p, 3);
  for (double z : {-10.0, 2.0, 24.5}) {
    const auto k = build_factorized_kernel(s, z, p, 1);
    const auto w = WeightMatrix::from_function(s, Space::Fourier, [&](Vec2 a, Vec2 b) {
      return tcc_ishizuka(a, b, z, p);
    });
    const ComplexField oracle = wcc_direct(psi, psi, w);
    EXPECT_LE(max_diff(simulate_image(psi, k), oracle), 1e-10 * max_abs(oracle));
  }
}

TEST(SimulateImage, FriedelNonnegativeAndBandLimited) {
  OpticalParams p;
  p.delta_nm = 2.0;
  p.alpha_conv_rad = 5e-4;
  const GridSpec s{64, 0.2};
  const ComplexField psi = random_wave(s, p, 8);
  const auto k = build_factorized_kernel(s, -3.0, p, 5);
  const ComplexField G = simulate_image(psi, k);
  const double gmax = max_abs(G);
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i) {
    EXPECT_LE(std::abs(G[i] - std::conj(at_negated(G, i))), 1e-12 * gmax);
    total += std::norm(G[i]);
    if (norm(s.frequency(i / s.n, i % s.n)) >= 2 * p.aperture_radius()) outside += std::norm(G[i]);
  }
  EXPECT_LE(outside, 1e-20 * total);
  const RealField img = simulate_image_real(psi, k);
  for (double v : img.values()) EXPECT_GE(v, -1e-12 * img.max_abs());
}

TEST(SimulateImage, ModulationCovariance) {
  const OpticalParams p;
  const GridSpec s{32, 0.1};
  const ComplexField psi = random_wave(s, p, 12);
  const auto k = build_factorized_kernel(s, 1.0, p, 1);
  const Vec2 shift{0.0137, -0.0041};
  const ComplexField a = simulate_image(modulate(psi, shift), k);
  const ComplexField b = modulate(simulate_image(psi, k), shift);
  EXPECT_LE(max_diff(a, b), 1e-12 * max_abs(b));
}

TEST(SimulateImage, RejectsMismatch) {
  const OpticalParams p;
  const auto k = build_factorized_kernel(GridSpec{16, 0.2}, 0.0, p, 1);
  EXPECT_THROW(simulate_image(ComplexField(GridSpec{16, 0.3}, Space::Fourier), k), std::invalid_argument);
  EXPECT_THROW(simulate_image(ComplexField(GridSpec{16, 0.2}, Space::Real), k), std::invalid_argument);
}

TEST(SyntheticWave, PlaneWaveWithoutAtoms) {
  const OpticalParams p;
  const GridSpec s{32, 0.4};
  const ComplexField psi = make_synthetic_wave(s, SyntheticWaveSpec{}, p);
  EXPECT_LE(max_diff(psi, plane_wave(s)), 1e-14);
}

TEST(SyntheticWave, PhasePeaksAtAtomSite) {
  const GridSpec s{64, 0.4};
  SyntheticWaveSpec w;
  w.atoms = {{{0.05, -0.1}, 0.8, 0.0, 0.02}};
  const ComplexField psi = synthetic_wave_real(s, w);
  std::size_t best = 0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (std::arg(psi[i]) > std::arg(psi[best])) best = i;
  const Vec2 x = s.position(best / s.n, best % s.n);
  EXPECT_NEAR(x.x, 0.05, 0.5 * s.pixel_size());
  EXPECT_NEAR(x.y, -0.1, 0.5 * s.pixel_size());
  EXPECT_NEAR(std::arg(psi[best]), 0.8, 1e-12);
}

TEST(SyntheticWave, PerovskiteAmplitudeEnvelopeAndPeriodicity) {
  const OpticalParams p;
  const GridSpec big{128, 0.8}, small{64, 0.4};
  const auto spec = perovskite_wave(0.4);
  const ComplexField real = inverse_spectral_transform(make_synthetic_wave(small, spec, p));
  for (const auto& v : real.values()) {
    EXPECT_GT(std::abs(v), 0.0);
    EXPECT_LE(std::abs(v), 2.0);
  }
  // The doubled grid holds two copies of the same cell.
  const ComplexField a = synthetic_wave_real(big, spec);
  const ComplexField b = synthetic_wave_real(small, spec);
  EXPECT_LE(max_diff(crop_center(a, small), b), 1e-15);
  SyntheticWaveSpec bad;
  bad.atoms = {{{0, 0}, 1.0, 0.0, 0.0}};
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Series, RampsAndDriftInPixels) {
  const auto foci = focus_ramp(-10.0, 1.5, 24);
  EXPECT_DOUBLE_EQ(foci.back(), 24.5);
  const auto d = drift_ramp({0.017, 0.0}, 3);
  EXPECT_EQ(d[0], (Vec2{0, 0}));
  EXPECT_DOUBLE_EQ(d[2].x, 0.034);
  EXPECT_NEAR(0.017 / (GridSpec{1024, 3.2}.pixel_size()), 5.44, 1e-12);
}

TEST(Series, ZeroDriftSingleFocusIsCroppedImage) {
  const OpticalParams p;
  const GridSpec big{64, 0.4}, small{32, 0.2};
  const ComplexField psi = make_synthetic_wave(big, perovskite_wave(0.2), p);
  const FocusSeries s = simulate_series(psi, small, {3.0}, {{0, 0}}, p, 1);
  ASSERT_EQ(s.size(), 1u);
  const RealField full = simulate_image_real(psi, build_factorized_kernel(big, 3.0, p, 1));
  const RealField crop = crop_center(full, small);
  for (std::size_t i = 0; i < crop.size(); ++i) EXPECT_NEAR(s.images[0][i], crop[i], 1e-12);
}

TEST(Series, DriftTranslatesImage) {
  const OpticalParams p;
  const GridSpec big{64, 0.4}, small{32, 0.2};
  const ComplexField psi = make_synthetic_wave(big, perovskite_wave(0.2), p);
  const double h = big.pixel_size();
  const FocusSeries s = simulate_series(psi, small, {3.0, 3.0}, {{0, 0}, {2 * h, -3 * h}}, p, 1);
  // image_1(x) = image_0(x - d).
  for (std::size_t r = 0; r < small.n; ++r)
    for (std::size_t c = 0; c < small.n; ++c) {
      const long long r0 = small.signed_index(r) + 3, c0 = small.signed_index(c) - 2;
      if (std::abs(r0) >= 16 || std::abs(c0) >= 16) continue;
      EXPECT_NEAR(s.images[1](r, c), s.images[0](small.wrap(r0), small.wrap(c0)), 1e-12);
    }
  EXPECT_EQ(s.translations_nm[1], (Vec2{2 * h, -3 * h}));
}

TEST(Series, ValidationRejectsBadInput) {
  FocusSeries s;
  s.spec = GridSpec{8, 1.0};
  EXPECT_THROW(s.validate(), ConfigError);
  RealField g(s.spec);
  g[0] = -1.0;
  g[1] = 1.0;
  s.images = {g};
  s.foci_nm = {0.0};
  s.translations_nm = {{0, 0}};
  EXPECT_THROW(s.validate(), ConfigError);
  s.images[0][0] = 0.0;
  EXPECT_NO_THROW(s.validate());
  s.foci_nm.push_back(1.0);
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Series, PoissonNoiseIsSeededAndUnbiased) {
  FocusSeries s;
  s.spec = GridSpec{64, 1.0};
  RealField g(s.spec);
  for (auto& v : g.values()) v = 1.0;
  g[0] = 0.0;
  s.images = {g};
  s.foci_nm = {0.0};
  s.translations_nm = {{0, 0}};
  FocusSeries a = s, b = s;
  add_poisson_noise(a, 100.0, 5);
  add_poisson_noise(b, 100.0, 5);
  EXPECT_EQ(a.images[0].values()[7], b.images[0].values()[7]);
  EXPECT_EQ(a.images[0][0], 0.0);
  EXPECT_NEAR(a.images[0].sum() / (s.spec.size() - 1), 1.0, 0.01);
  EXPECT_THROW(add_poisson_noise(a, 0.0, 1), ConfigError);
}
