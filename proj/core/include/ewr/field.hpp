#pragma once

#include "ewr/grid.hpp"
#include "ewr/vec2.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ewr {

using cplx = std::complex<double>;

/// Complex samples on a GridSpec, tagged with the domain they live in.
///
/// Exit waves, Fourier-space images and kernel factors are all stored as
/// ComplexField. Sample layout follows GridSpec (row-major, FFT order).
class ComplexField {
 public:
  ComplexField() = default;
  ComplexField(GridSpec spec, Space space);
  ComplexField(GridSpec spec, Space space, std::vector<cplx> values);

  const GridSpec& spec() const { return spec_; }
  Space space() const { return space_; }
  std::size_t n() const { return spec_.n; }
  std::size_t size() const { return values_.size(); }

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }

  cplx& operator()(std::size_t row, std::size_t col) { return values_[row * spec_.n + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return values_[row * spec_.n + col];
  }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  /// Sample-cell measure: pixel_size^2 in real space, freq_step^2 in Fourier space.
  double cell_area() const;
  /// Physical coordinate (nm or 1/nm) of a storage index in this field's space.
  Vec2 coordinate(std::size_t row, std::size_t col) const;

  bool all_finite() const;

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(cplx s);
  /// Elementwise product.
  ComplexField& multiply(const ComplexField& o);

  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(ComplexField a, cplx s) { return a *= s; }
  friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

 private:
  GridSpec spec_{};
  Space space_ = Space::Real;
  std::vector<cplx> values_;
};

/// Real samples on a GridSpec. Images g_j and masks use this type; masks are
/// interpreted on the frequency lattice.
class RealField {
 public:
  RealField() = default;
  explicit RealField(GridSpec spec);
  RealField(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  std::size_t n() const { return spec_.n; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double& operator()(std::size_t row, std::size_t col) { return values_[row * spec_.n + col]; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * spec_.n + col]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;
  double max_abs() const;
  double sum() const;

 private:
  GridSpec spec_{};
  std::vector<double> values_;
};

/// Real-space field with zero imaginary part.
ComplexField to_complex(const RealField& f);
/// Real part of a real-space field. Throws NumericalError if the imaginary
/// residue exceeds rel_tol * max|f|.
RealField real_part(const ComplexField& f, double rel_tol);

/// Discrete L2 pairing sum conj(f) g * cell_area, conjugate-linear in f.
cplx inner_product(const ComplexField& f, const ComplexField& g);
double l2_norm_sq(const ComplexField& f);
double l2_norm(const ComplexField& f);
double inner_product(const RealField& f, const RealField& g);
double l2_norm_sq(const RealField& f);
double max_abs(const ComplexField& f);

/// 0/1 indicator of |v| < radius on the frequency lattice of spec. Radii
/// beyond Nyquist are accepted with a warning (the mask saturates).
RealField band_mask(const GridSpec& spec, double radius);
/// Elementwise product of a Fourier-space field with a mask.
ComplexField apply_mask(ComplexField f, const RealField& mask);

/// Multiply a Fourier-space field by exp(2 pi i v . shift). In real space this
/// is the sub-pixel translation x -> f(x + shift). The Nyquist row/column is
/// its own mirror image, so non-integer shifts break Hermitian symmetry there;
/// fields band-limited below Nyquist are unaffected.
ComplexField modulate(const ComplexField& f, Vec2 shift_nm);

/// Real-space circular shift by whole pixels: out(i) = f(i + shift).
ComplexField circular_shift(const ComplexField& f, long long shift_rows, long long shift_cols);

/// Central window (signed positions -n/2 .. n/2-1) of a larger real-space
/// field. The target grid must share the source pixel size.
RealField crop_center(const RealField& f, const GridSpec& target);
ComplexField crop_center(const ComplexField& f, const GridSpec& target);

}  // namespace ewr
