#pragma once

#include "ewr/field.hpp"
#include "ewr/kernel.hpp"
#include "ewr/optics.hpp"

#include <cstdint>
#include <vector>

namespace ewr {

/// Simulated Fourier-space image sum_j (psi t_j) * (psi t_j). The kernel
/// factors vanish outside the aperture, which masks psi implicitly.
ComplexField simulate_image(const ComplexField& psi, const FactorizedKernel& kernel);
/// Real-space image sum_j |F^-1(psi t_j)|^2, nonnegative by construction.
RealField simulate_image_real(const ComplexField& psi, const FactorizedKernel& kernel);

struct SyntheticAtom {
  Vec2 position_nm;
  /// Peak phase shift in rad.
  double phase = 0.0;
  /// Peak log-amplitude loss; negative values brighten the site.
  double absorption = 0.0;
  double width_nm = 0.02;
};

/// Gaussian-bump exit wave
///   psi(x) = background * exp(sum_a (i phase_a - absorption_a) G_a(x)),
/// periodic with period cell_nm on both axes (cell_nm = 0 means the grid extent).
struct SyntheticWaveSpec {
  std::vector<SyntheticAtom> atoms;
  double background = 1.0;
  double cell_nm = 0.0;

  void validate() const;
};

/// Perovskite-like test cell: heavy column at the corner, mixed column at the
/// center, light columns on the edge midpoints.
SyntheticWaveSpec perovskite_wave(double cell_nm);

/// Fourier-space wave built on spec and masked to the objective aperture. The
/// cell must span a whole number of pixels so every periodic copy is sampled
/// identically.
ComplexField make_synthetic_wave(const GridSpec& spec, const SyntheticWaveSpec& s, const OpticalParams& p);
/// The unmasked real-space wave the above transforms.
ComplexField synthetic_wave_real(const GridSpec& spec, const SyntheticWaveSpec& s);

struct FocusSeries {
  GridSpec spec;
  OpticalParams params;
  int n_focal = 7;
  std::vector<RealField> images;
  std::vector<double> foci_nm;
  /// Ground truth for simulated series, estimates otherwise.
  std::vector<Vec2> translations_nm;

  std::size_t size() const { return images.size(); }
  /// Throws ConfigError on length mismatch, wrong grids, non-finite or
  /// negative (beyond -1e-12 max) samples.
  void validate() const;
};

/// foci_j = start + j step for j < count.
std::vector<double> focus_ramp(double start_nm, double step_nm, std::size_t count);
/// Cumulative drift j * step.
std::vector<Vec2> drift_ramp(Vec2 step_nm, std::size_t count);

/// Simulates each focus on the large grid of psi_large, shifts the image by
/// its drift (image_j(x) = I(x - d_j), applied as a Fourier modulation),
/// returns to real space and crops the central window described by target.
/// Throws NumericalError if an image fails the realness check.
FocusSeries simulate_series(const ComplexField& psi_large, const GridSpec& target,
                            const std::vector<double>& foci_nm, const std::vector<Vec2>& drifts_nm,
                            const OpticalParams& p, int n_focal);

/// Replaces every pixel by a Poisson count at the given dose (electrons per
/// unit intensity) and rescales back. Off by default in every protocol.
void add_poisson_noise(FocusSeries& series, double dose, std::uint64_t seed);

}  // namespace ewr
