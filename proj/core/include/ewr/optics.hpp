#pragma once

#include "ewr/field.hpp"
#include "ewr/vec2.hpp"

namespace ewr {

/// Microscope constants. Lengths in nm, angles in rad.
struct OpticalParams {
  double lambda_nm = 0.00196875;
  double cs_nm = -70.0;
  double alpha_max_rad = 0.125;
  /// Standard deviation of the Gaussian focus spread.
  double delta_nm = 0.0;
  /// Beam convergence half angle.
  double alpha_conv_rad = 0.0;

  /// Throws std::invalid_argument on non-physical values.
  void validate() const;
  /// Objective aperture radius alpha_max / lambda in 1/nm.
  double aperture_radius() const { return alpha_max_rad / lambda_nm; }

  friend bool operator==(const OpticalParams&, const OpticalParams&) = default;
};

/// Wave aberration 1/2 Z lambda |v|^2 + 1/4 Cs lambda^3 |v|^4.
double chi(Vec2 v, double focus_nm, const OpticalParams& p);
/// Analytic gradient (Z lambda + Cs lambda^3 |v|^2) v.
Vec2 chi_gradient(Vec2 v, double focus_nm, const OpticalParams& p);
/// exp(-2 pi i chi).
cplx pupil(Vec2 v, double focus_nm, const OpticalParams& p);
/// 1 if lambda |v| < alpha_max, else 0.
double aperture(Vec2 v, const OpticalParams& p);

/// Spatial-coherence envelope exp(-(pi alpha / lambda)^2 |grad chi(v) - grad chi(w)|^2).
double envelope_spatial(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p);
/// Temporal-coherence envelope exp(-1/2 (pi Delta lambda)^2 (|v|^2 - |w|^2)^2).
double envelope_temporal(Vec2 v, Vec2 w, const OpticalParams& p);

/// Ishizuka's product-form TCC.
cplx tcc_ishizuka(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p);
/// Same with the spatial envelope replaced by E_s(v,0) E_s(w,0), the form the
/// factorized kernel approximates.
cplx tcc_ishizuka_rank1(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p);

/// Aperture indicator sampled on the frequency lattice of spec.
RealField aperture_mask(const GridSpec& spec, const OpticalParams& p);

}  // namespace ewr
