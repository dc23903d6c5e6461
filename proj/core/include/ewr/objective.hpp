#pragma once

#include "ewr/forward.hpp"
#include "ewr/kernel.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace ewr {

/// Tikhonov term alpha ||psi - psi_m||^2; psi_m absent means zero.
struct RegularizerSpec {
  double alpha = 0.0;
  std::optional<ComplexField> psi_m;
};

struct EnergyBreakdown {
  double total = 0.0;
  double data_term = 0.0;
  double regularizer = 0.0;
  /// ||psi *_T psi - mu_t G_j||^2 per image.
  std::vector<double> residual_norms_sq;
};

struct Evaluation {
  EnergyBreakdown energy;
  /// Riesz representer of the wave differential under Re<.,.>, aperture-masked.
  ComplexField grad_wave;
  /// d E / d t_j in 1/nm per image (the first entry is not pinned here).
  std::vector<Vec2> grad_translations;
};

/// E(psi, t) = (1/N) sum_j ||psi *_{T_j} psi - mu_{t_j} G_j||^2 + alpha ||psi - psi_m||^2
/// with G_j the spectrum of image j restricted to |v| < 2 r_a. The wave is a
/// Fourier-space field on the series grid, expected to vanish outside the
/// aperture. Translations follow image_j(x) = I(x - t_j).
class Objective {
 public:
  /// Builds one factorized kernel per focus with series.n_focal nodes.
  Objective(const FocusSeries& series, RegularizerSpec reg);
  /// Uses the given kernels; kernel j must carry focus Z_j on the series grid.
  Objective(const FocusSeries& series, std::vector<FactorizedKernel> kernels, RegularizerSpec reg);

  std::size_t size() const { return data_.size(); }
  const GridSpec& spec() const { return spec_; }
  const OpticalParams& params() const { return params_; }
  const RegularizerSpec& regularizer() const { return reg_; }
  const std::vector<FactorizedKernel>& kernels() const { return kernels_; }
  /// Prefiltered Fourier-space image j.
  const ComplexField& data(std::size_t j) const { return data_[j]; }
  const RealField& aperture() const { return aperture_; }
  const RealField& support() const { return support_; }

  EnergyBreakdown energy(const ComplexField& psi, std::span<const Vec2> t) const;
  Evaluation evaluate(const ComplexField& psi, std::span<const Vec2> t) const;
  ComplexField gradient_wave(const ComplexField& psi, std::span<const Vec2> t) const;
  std::vector<Vec2> gradient_translation(const ComplexField& psi, std::span<const Vec2> t) const;

  /// C0..C4 of s -> data_term(psi + s phi, t), computed from weighted
  /// cross-correlations in Fourier space (independent of the gradient path).
  /// Throws std::invalid_argument for phi = 0.
  std::array<double, 5> line_coefficients(const ComplexField& psi, const ComplexField& phi,
                                          std::span<const Vec2> t) const;

  /// -(2/N) sum_j ||g_j||_L1 of the raw images.
  double l1_limit() const { return l1_limit_; }

 private:
  void check_inputs(const ComplexField& psi, std::span<const Vec2> t) const;
  double regularizer_value(const ComplexField& psi) const;
  EnergyBreakdown run(const ComplexField& psi, std::span<const Vec2> t, Evaluation* grad) const;

  GridSpec spec_;
  OpticalParams params_;
  RegularizerSpec reg_;
  std::vector<FactorizedKernel> kernels_;
  std::vector<ComplexField> data_;
  RealField aperture_;
  RealField support_;
  double l1_limit_ = 0.0;
};

/// Fourier-space Gaussian exp(-|v|^2 / (2 width^2)) scaled so its real-space
/// value at the origin is 1. width <= 0 gives the impulse extent^2 delta_0.
ComplexField mollified_delta(const GridSpec& spec, double width);

/// C2 of the line restriction at psi = 0 along mollified_delta(width),
/// evaluated at translations t.
double convexity_probe(const Objective& objective, double width, std::span<const Vec2> t);

}  // namespace ewr
