#pragma once

#include "ewr/field.hpp"

#include <span>

namespace ewr {

/// Discretized continuous Fourier transform F f(v) = int f(x) exp(-2 pi i v.x) dx.
///
/// The forward direction multiplies the DFT by pixel_size^2 and the inverse
/// multiplies the inverse DFT by freq_step^2, so the pair is an isometry for
/// the cell-weighted inner products and a round trip is the identity.
ComplexField spectral_transform(const ComplexField& f);
ComplexField inverse_spectral_transform(const ComplexField& f);

/// Real-space input convenience.
ComplexField spectral_transform(const RealField& f);

/// Unscaled in-place 1-D complex DFT (sign -1 forward, +1 backward). Used by
/// the 1-D coercivity probe.
void dft_1d(std::span<cplx> data, int sign);

}  // namespace ewr
