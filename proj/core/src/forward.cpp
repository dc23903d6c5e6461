#include "ewr/forward.hpp"

#include "ewr/errors.hpp"
#include "ewr/parallel.hpp"
#include "ewr/spectral.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ewr {

RealField simulate_image_real(const ComplexField& psi, const FactorizedKernel& kernel) {
  if (psi.space() != Space::Fourier) throw std::invalid_argument("simulate_image: psi must be Fourier-space");
  if (kernel.factors.empty()) throw std::invalid_argument("simulate_image: empty kernel");
  if (kernel.spec() != psi.spec()) throw std::invalid_argument("simulate_image: kernel grid mismatch");
  RealField out(psi.spec());
  for (const auto& t : kernel.factors.factors) {
    ComplexField a = psi;
    a.multiply(t);
    const ComplexField w = inverse_spectral_transform(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += std::norm(w[i]);
  }
  return out;
}

ComplexField simulate_image(const ComplexField& psi, const FactorizedKernel& kernel) {
  return spectral_transform(simulate_image_real(psi, kernel));
}

void SyntheticWaveSpec::validate() const {
  if (!(background > 0.0)) throw ConfigError("synthetic wave: background must be > 0");
  if (cell_nm < 0.0) throw ConfigError("synthetic wave: cell must be >= 0");
  for (const auto& a : atoms) {
    if (!(a.width_nm > 0.0)) throw ConfigError("synthetic wave: atom widths must be > 0");
    if (!std::isfinite(a.phase) || !std::isfinite(a.absorption) || !std::isfinite(a.position_nm.x) ||
        !std::isfinite(a.position_nm.y))
      throw ConfigError("synthetic wave: non-finite atom parameter");
  }
}

SyntheticWaveSpec perovskite_wave(double cell_nm) {
  SyntheticWaveSpec s;
  s.cell_nm = cell_nm;
  const double h = 0.5 * cell_nm;
  s.atoms = {
      {{0.0, 0.0}, 0.9, 0.10, 0.030},
      {{h, h}, 0.6, 0.05, 0.028},
      {{h, 0.0}, 0.25, 0.0, 0.025},
      {{0.0, h}, 0.25, 0.0, 0.025},
  };
  return s;
}

ComplexField synthetic_wave_real(const GridSpec& spec, const SyntheticWaveSpec& s) {
  spec.validate();
  s.validate();
  const double h = spec.pixel_size();
  const double cell = s.cell_nm > 0.0 ? s.cell_nm : spec.extent_nm;
  const double cells = cell / h;
  const long long cell_px = std::llround(cells);
  if (cell_px < 2 || std::abs(cells - static_cast<double>(cell_px)) > 1e-9 * cells)
    throw ConfigError("synthetic wave: cell must span a whole number of pixels");

  // Reduce every sample to the same representative inside one cell so
  // periodic copies see bit-identical arguments.
  auto reduce = [&](int k) {
    long long r = ((k % cell_px) + cell_px) % cell_px;
    if (r >= cell_px / 2) r -= cell_px;
    return static_cast<double>(r) * h;
  };
  auto wrap = [&](double d) { return d - cell * std::round(d / cell); };

  ComplexField out(spec, Space::Real);
  for (std::size_t row = 0; row < spec.n; ++row) {
    const double y = reduce(spec.signed_index(row));
    for (std::size_t col = 0; col < spec.n; ++col) {
      const double x = reduce(spec.signed_index(col));
      cplx e{0.0, 0.0};
      for (const auto& a : s.atoms) {
        const double dx = wrap(x - a.position_nm.x);
        const double dy = wrap(y - a.position_nm.y);
        const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * a.width_nm * a.width_nm));
        e += cplx{-a.absorption, a.phase} * g;
      }
      out(row, col) = s.background * std::exp(e);
    }
  }
  return out;
}

ComplexField make_synthetic_wave(const GridSpec& spec, const SyntheticWaveSpec& s, const OpticalParams& p) {
  return apply_mask(spectral_transform(synthetic_wave_real(spec, s)), aperture_mask(spec, p));
}

void FocusSeries::validate() const {
  if (images.empty()) throw ConfigError("focus series: no images");
  if (foci_nm.size() != images.size() || translations_nm.size() != images.size())
    throw ConfigError("focus series: image, focus and translation counts differ");
  for (const auto& g : images) {
    if (g.spec() != spec) throw ConfigError("focus series: image grid differs from series grid");
    if (!g.all_finite()) throw ConfigError("focus series: non-finite image sample");
    const double floor = -1e-12 * g.max_abs();
    for (double v : g.values())
      if (v < floor) throw ConfigError("focus series: negative image intensity");
  }
  for (double z : foci_nm)
    if (!std::isfinite(z)) throw ConfigError("focus series: non-finite focus");
  for (const auto& t : translations_nm)
    if (!std::isfinite(t.x) || !std::isfinite(t.y)) throw ConfigError("focus series: non-finite translation");
}

std::vector<double> focus_ramp(double start_nm, double step_nm, std::size_t count) {
  std::vector<double> z(count);
  for (std::size_t j = 0; j < count; ++j) z[j] = start_nm + static_cast<double>(j) * step_nm;
  return z;
}

std::vector<Vec2> drift_ramp(Vec2 step_nm, std::size_t count) {
  std::vector<Vec2> d(count);
  for (std::size_t j = 0; j < count; ++j) d[j] = static_cast<double>(j) * step_nm;
  return d;
}

FocusSeries simulate_series(const ComplexField& psi_large, const GridSpec& target,
                            const std::vector<double>& foci_nm, const std::vector<Vec2>& drifts_nm,
                            const OpticalParams& p, int n_focal) {
  if (foci_nm.empty()) throw ConfigError("simulate_series: no foci requested");
  if (foci_nm.size() != drifts_nm.size()) throw ConfigError("simulate_series: focus and drift counts differ");
  if (psi_large.space() != Space::Fourier) throw std::invalid_argument("simulate_series: psi must be Fourier-space");
  target.validate();
  p.validate();

  FocusSeries series;
  series.spec = target;
  series.params = p;
  series.n_focal = n_focal;
  series.foci_nm = foci_nm;
  series.translations_nm = drifts_nm;
  series.images.resize(foci_nm.size());

  parallel_for(foci_nm.size(), [&](std::size_t j) {
    const auto kernel = build_factorized_kernel(psi_large.spec(), foci_nm[j], p, n_focal);
    const ComplexField shifted = modulate(simulate_image(psi_large, kernel), -drifts_nm[j]);
    const ComplexField real = inverse_spectral_transform(shifted);
    series.images[j] = crop_center(real_part(real, 1e-12), target);
  });
  return series;
}

void add_poisson_noise(FocusSeries& series, double dose, std::uint64_t seed) {
  if (!(dose > 0.0)) throw ConfigError("noise dose must be > 0");
  std::mt19937_64 rng(seed);
  for (auto& g : series.images)
    for (auto& v : g.values()) {
      const double mean = std::max(v, 0.0) * dose;
      if (mean == 0.0) continue;
      std::poisson_distribution<long long> d(mean);
      v = static_cast<double>(d(rng)) / dose;
    }
}

}  // namespace ewr
