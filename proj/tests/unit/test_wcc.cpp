#include "ewr/spectral.hpp"
#include "ewr/wcc.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ewr;
using ewr::test::max_diff;
using ewr::test::random_field;

namespace {

const GridSpec kSmall{8, 1.3};

FactorList random_factors(const GridSpec& s, Space space, int count, std::uint64_t seed) {
  FactorList k;
  for (int j = 0; j < count; ++j) k.factors.push_back(random_field(s, space, seed + j));
  return k;
}

// out(-x) at storage index of x.
cplx at_negated(const ComplexField& f, std::size_t r, std::size_t c) {
  const GridSpec& s = f.spec();
  return f(s.wrap(-s.signed_index(r)), s.wrap(-s.signed_index(c)));
}

}  // namespace

TEST(WccDirect, ImpulseAutocorrelation) {
  ComplexField d(kSmall, Space::Real);
  d[0] = 1.0;
  const ComplexField out = wcc_direct(d, d, WeightMatrix::constant(kSmall, Space::Real, 1.0));
  const double h2 = kSmall.pixel_size() * kSmall.pixel_size();
  EXPECT_NEAR(std::abs(out[0] - h2), 0.0, 1e-15);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_EQ(out[i], cplx(0.0));
}

TEST(WccDirect, ZeroWeightGivesZero) {
  const auto f = random_field(kSmall, Space::Real, 1), g = random_field(kSmall, Space::Real, 2);
  const ComplexField out = wcc_direct(f, g, WeightMatrix::constant(kSmall, Space::Real, 0.0));
  EXPECT_EQ(max_abs(out), 0.0);
}

TEST(WccDirect, RefusesLargeGrids) {
  const GridSpec big{32, 1.0};
  ComplexField f(big, Space::Real);
  EXPECT_THROW(WeightMatrix(big, Space::Real), std::invalid_argument);
  EXPECT_THROW(wcc_direct(f, f, WeightMatrix::constant(kSmall, Space::Real, 1.0)), std::invalid_argument);
}

TEST(XcorrSpectral, AgreesWithDirectInBothSpaces) {
  for (Space sp : {Space::Real, Space::Fourier}) {
    const auto f = random_field(kSmall, sp, 3), g = random_field(kSmall, sp, 4);
    const ComplexField fast = xcorr_spectral(f, g);
    const ComplexField slow = wcc_direct(f, g, WeightMatrix::constant(kSmall, sp, 1.0));
    EXPECT_EQ(fast.space(), sp);
    EXPECT_LE(max_diff(fast, slow), 1e-10 * max_abs(slow));
  }
}

TEST(XcorrSpectral, LagZeroIsSquaredNorm) {
  const auto f = random_field(GridSpec{32, 0.7}, Space::Fourier, 5);
  const cplx v = xcorr_spectral(f, f)[0];
  EXPECT_NEAR(v.real(), l2_norm_sq(f), 1e-12 * l2_norm_sq(f));
  EXPECT_NEAR(v.imag(), 0.0, 1e-12 * l2_norm_sq(f));
}

TEST(XcorrSpectral, SwapSymmetry) {
  const GridSpec s{16, 2.0};
  const auto f = random_field(s, Space::Real, 6), g = random_field(s, Space::Real, 7);
  const ComplexField fg = xcorr_spectral(f, g), gf = xcorr_spectral(g, f);
  double err = 0.0;
  for (std::size_t r = 0; r < s.n; ++r)
    for (std::size_t c = 0; c < s.n; ++c) err = std::max(err, std::abs(fg(r, c) - std::conj(at_negated(gf, r, c))));
  EXPECT_LE(err, 1e-12 * max_abs(fg));
  EXPECT_THROW(xcorr_spectral(f, random_field(s, Space::Fourier, 1)), std::invalid_argument);
}

TEST(WccFactorized, MatchesDirectWithTabulatedWeight) {
  for (Space sp : {Space::Real, Space::Fourier}) {
    const auto f = random_field(kSmall, sp, 8), g = random_field(kSmall, sp, 9);
    const FactorList k = random_factors(kSmall, sp, 3, 100);
    const ComplexField fast = wcc_factorized(f, g, k);
    const ComplexField slow = wcc_direct(f, g, k.to_matrix());
    EXPECT_LE(max_diff(fast, slow), 1e-12 * max_abs(slow));
  }
}

TEST(WccFactorized, SingleUnitFactorIsPlainCorrelation) {
  const auto f = random_field(kSmall, Space::Fourier, 10), g = random_field(kSmall, Space::Fourier, 11);
  FactorList k;
  k.factors.emplace_back(kSmall, Space::Fourier);
  for (auto& v : k.factors[0].values()) v = 1.0;
  EXPECT_LE(max_diff(wcc_factorized(f, g, k), xcorr_spectral(f, g)), 1e-12 * max_abs(xcorr_spectral(f, g)));
}

TEST(WccFactorized, EmptyListAndLinearity) {
  const auto f = random_field(kSmall, Space::Fourier, 12), g = random_field(kSmall, Space::Fourier, 13);
  const ComplexField z = wcc_factorized(f, g, FactorList{});
  EXPECT_EQ(z.space(), Space::Fourier);
  EXPECT_EQ(max_abs(z), 0.0);
  const FactorList k = random_factors(kSmall, Space::Fourier, 2, 20);
  const cplx a{0.4, 2.0};
  const ComplexField base = wcc_factorized(f, g, k);
  EXPECT_LE(max_diff(wcc_factorized(f, g * a, k), base * a), 1e-12 * max_abs(base) * std::abs(a));
  EXPECT_LE(max_diff(wcc_factorized(f * a, g, k), base * std::conj(a)), 1e-12 * max_abs(base) * std::abs(a));
}

TEST(WccFactorized, AutocorrelationImageIsRealAndNonnegative) {
  const GridSpec s{32, 0.9};
  const auto f = random_field(s, Space::Fourier, 14);
  const FactorList k = random_factors(s, Space::Fourier, 4, 30);
  const ComplexField img = inverse_spectral_transform(wcc_factorized(f, f, k));
  const double m = max_abs(img);
  for (const auto& v : img.values()) {
    EXPECT_GE(v.real(), -1e-12 * m);
    EXPECT_LE(std::abs(v.imag()), 1e-12 * m);
  }
}

TEST(WccProperties, SupBoundedByWeightTimesNormSquared) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_field(kSmall, Space::Fourier, 40 + trial);
    const WeightMatrix w = WeightMatrix::from_function(kSmall, Space::Fourier, [&](Vec2, Vec2) {
      return cplx(u(rng), u(rng));
    });
    const ComplexField out = wcc_direct(f, f, w);
    EXPECT_LE(max_abs(out), w.sup_abs() * l2_norm_sq(f) * (1 + 1e-12));
  }
}

TEST(WccProperties, HermitianWeightSymmetry) {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> n(0.0, 1.0);
  WeightMatrix w(kSmall, Space::Fourier);
  const std::size_t m = kSmall.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      const cplx v = a == b ? cplx(n(rng)) : cplx(n(rng), n(rng));
      w(a, b) = v;
      w(b, a) = std::conj(v);
    }
  ASSERT_TRUE(w.is_hermitian(0.0));
  const auto f = random_field(kSmall, Space::Fourier, 17), g = random_field(kSmall, Space::Fourier, 18);
  const ComplexField fg = wcc_direct(f, g, w), gf = wcc_direct(g, f, w);
  double err = 0.0;
  for (std::size_t r = 0; r < kSmall.n; ++r)
    for (std::size_t c = 0; c < kSmall.n; ++c)
      err = std::max(err, std::abs(fg(r, c) - std::conj(at_negated(gf, r, c))));
  EXPECT_LE(err, 1e-12 * max_abs(fg));
}

TEST(WccProperties, NonzeroInputHasNonzeroAutocorrelation) {
  // Diagonal of w bounded below by 1 on the whole lattice.
  FactorList k;
  k.factors.emplace_back(kSmall, Space::Fourier);
  for (auto& v : k.factors[0].values()) v = 1.0;
  k.factors.push_back(random_field(kSmall, Space::Fourier, 50));
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_field(kSmall, Space::Fourier, 60 + trial) * 1e-3;
    EXPECT_GT(l2_norm(wcc_factorized(f, f, k)), 0.0);
  }
}
