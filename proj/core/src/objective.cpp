#include "ewr/objective.hpp"

#include "ewr/diagnostics.hpp"
#include "ewr/errors.hpp"
#include "ewr/parallel.hpp"
#include "ewr/spectral.hpp"
#include "ewr/wcc.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ewr {

using std::numbers::pi;

namespace {

std::vector<FactorizedKernel> default_kernels(const FocusSeries& s) {
  std::vector<FactorizedKernel> k(s.size());
  parallel_for(s.size(), [&](std::size_t j) {
    k[j] = build_factorized_kernel(s.spec, s.foci_nm[j], s.params, s.n_focal);
  });
  return k;
}

// Per-image scratch results, reduced in index order afterwards.
struct ImageTerms {
  double residual_sq = 0.0;
  ComplexField grad_wave;
  Vec2 grad_t;
};

}  // namespace

Objective::Objective(const FocusSeries& series, RegularizerSpec reg)
    : Objective(series, default_kernels(series), std::move(reg)) {}

Objective::Objective(const FocusSeries& series, std::vector<FactorizedKernel> kernels, RegularizerSpec reg)
    : spec_(series.spec), params_(series.params), reg_(std::move(reg)), kernels_(std::move(kernels)) {
  if (series.size() == 0) throw ConfigError("objective: empty series");
  series.validate();
  if (kernels_.size() != series.size()) throw ConfigError("objective: one kernel per image required");
  for (std::size_t j = 0; j < kernels_.size(); ++j) {
    if (kernels_[j].factors.empty() || kernels_[j].spec() != spec_)
      throw ConfigError("objective: kernel grid differs from series grid");
    if (kernels_[j].focus_nm != series.foci_nm[j])
      throw ConfigError("objective: kernel focus does not match image focus");
  }
  if (!(reg_.alpha >= 0.0)) throw ConfigError("objective: alpha must be >= 0");
  if (reg_.psi_m && (reg_.psi_m->spec() != spec_ || reg_.psi_m->space() != Space::Fourier))
    throw ConfigError("objective: prior wave must be Fourier-space on the series grid");

  const double ra = params_.aperture_radius();
  if (2.0 * ra >= spec_.nyquist()) {
    std::ostringstream msg;
    msg << "doubled aperture radius " << 2.0 * ra << " reaches Nyquist " << spec_.nyquist()
        << "; modulated data loses Hermitian symmetry on the edge";
    warn(msg.str());
  }
  aperture_ = aperture_mask(spec_, params_);
  support_ = band_mask(spec_, 2.0 * ra);

  const double h2 = spec_.pixel_size() * spec_.pixel_size();
  data_.resize(series.size());
  double l1 = 0.0;
  for (std::size_t j = 0; j < series.size(); ++j) {
    data_[j] = apply_mask(spectral_transform(series.images[j]), support_);
    double s = 0.0;
    for (double v : series.images[j].values()) s += std::abs(v);
    l1 += s * h2;
  }
  l1_limit_ = -2.0 * l1 / static_cast<double>(series.size());
}

void Objective::check_inputs(const ComplexField& psi, std::span<const Vec2> t) const {
  if (psi.spec() != spec_ || psi.space() != Space::Fourier)
    throw std::invalid_argument("objective: wave must be Fourier-space on the series grid");
  if (t.size() != data_.size()) throw std::invalid_argument("objective: one translation per image required");
}

double Objective::regularizer_value(const ComplexField& psi) const {
  if (reg_.alpha == 0.0) return 0.0;
  if (!reg_.psi_m) return reg_.alpha * l2_norm_sq(psi);
  return reg_.alpha * l2_norm_sq(psi - *reg_.psi_m);
}

EnergyBreakdown Objective::run(const ComplexField& psi, std::span<const Vec2> t, Evaluation* grad) const {
  check_inputs(psi, t);
  const std::size_t n_img = data_.size();
  const double inv_n = 1.0 / static_cast<double>(n_img);
  const double h2 = spec_.pixel_size() * spec_.pixel_size();
  const double dv2 = spec_.freq_step() * spec_.freq_step();

  std::vector<ImageTerms> terms(n_img);
  parallel_for(n_img, [&](std::size_t j) {
    const auto& factors = kernels_[j].factors.factors;
    std::vector<ComplexField> waves;
    waves.reserve(factors.size());
    RealField r(spec_);
    for (const auto& tk : factors) {
      ComplexField a = psi;
      a.multiply(tk);
      waves.push_back(inverse_spectral_transform(a));
      const auto& w = waves.back();
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += std::norm(w[i]);
    }
    const ComplexField target = modulate(data_[j], t[j]);
    const ComplexField target_real = inverse_spectral_transform(target);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= target_real[i].real();
      acc += r[i] * r[i];
    }
    terms[j].residual_sq = acc * h2;
    if (!grad) return;

    ComplexField gw(spec_, Space::Fourier);
    for (std::size_t k = 0; k < factors.size(); ++k) {
      ComplexField rw = waves[k];
      for (std::size_t i = 0; i < rw.size(); ++i) rw[i] *= r[i];
      const ComplexField f = spectral_transform(rw);
      const auto& tk = factors[k];
      for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += std::conj(tk[i]) * f[i];
    }
    terms[j].grad_wave = std::move(gw);

    // dE/dt_c = -(2/N) Re <R, 2 pi i v_c mu_t G>.
    const ComplexField res = spectral_transform(r);
    double gx = 0.0, gy = 0.0;
    for (std::size_t row = 0; row < spec_.n; ++row)
      for (std::size_t col = 0; col < spec_.n; ++col) {
        const std::size_t i = row * spec_.n + col;
        const Vec2 v = spec_.frequency(row, col);
        const cplx c = std::conj(res[i]) * cplx{0.0, 2.0 * pi} * target[i];
        gx += v.x * c.real();
        gy += v.y * c.real();
      }
    terms[j].grad_t = {-2.0 * inv_n * dv2 * gx, -2.0 * inv_n * dv2 * gy};
  });

  EnergyBreakdown e;
  e.residual_norms_sq.reserve(n_img);
  double data = 0.0;
  for (const auto& term : terms) {
    e.residual_norms_sq.push_back(term.residual_sq);
    data += term.residual_sq;
  }
  e.data_term = data * inv_n;
  e.regularizer = regularizer_value(psi);
  e.total = e.data_term + e.regularizer;
  if (!std::isfinite(e.total)) throw NumericalError("objective: non-finite energy");

  if (grad) {
    ComplexField g(spec_, Space::Fourier);
    grad->grad_translations.clear();
    for (auto& term : terms) {
      g += term.grad_wave;
      grad->grad_translations.push_back(term.grad_t);
    }
    g *= 4.0 * inv_n;
    if (reg_.alpha != 0.0) {
      ComplexField d = psi;
      if (reg_.psi_m) d -= *reg_.psi_m;
      d *= 2.0 * reg_.alpha;
      g += d;
    }
    grad->grad_wave = apply_mask(std::move(g), aperture_);
    grad->energy = e;
  }
  return e;
}

EnergyBreakdown Objective::energy(const ComplexField& psi, std::span<const Vec2> t) const {
  return run(psi, t, nullptr);
}

Evaluation Objective::evaluate(const ComplexField& psi, std::span<const Vec2> t) const {
  Evaluation ev;
  run(psi, t, &ev);
  return ev;
}

ComplexField Objective::gradient_wave(const ComplexField& psi, std::span<const Vec2> t) const {
  return evaluate(psi, t).grad_wave;
}

std::vector<Vec2> Objective::gradient_translation(const ComplexField& psi, std::span<const Vec2> t) const {
  return evaluate(psi, t).grad_translations;
}

std::array<double, 5> Objective::line_coefficients(const ComplexField& psi, const ComplexField& phi,
                                                   std::span<const Vec2> t) const {
  check_inputs(psi, t);
  if (phi.spec() != spec_ || phi.space() != Space::Fourier)
    throw std::invalid_argument("line_coefficients: direction must be Fourier-space on the series grid");
  if (max_abs(phi) == 0.0) throw std::invalid_argument("line_coefficients: zero direction");

  const std::size_t n_img = data_.size();
  std::vector<std::array<double, 5>> per(n_img);
  parallel_for(n_img, [&](std::size_t j) {
    const FactorList& k = kernels_[j].factors;
    const ComplexField r0 = wcc_factorized(psi, psi, k) - modulate(data_[j], t[j]);
    const ComplexField d = wcc_factorized(psi, phi, k) + wcc_factorized(phi, psi, k);
    const ComplexField c = wcc_factorized(phi, phi, k);
    per[j] = {l2_norm_sq(r0), 2.0 * inner_product(r0, d).real(),
              l2_norm_sq(d) + 2.0 * inner_product(r0, c).real(), 2.0 * inner_product(d, c).real(),
              l2_norm_sq(c)};
  });
  std::array<double, 5> out{};
  for (const auto& p : per)
    for (int i = 0; i < 5; ++i) out[i] += p[i];
  for (auto& v : out) v /= static_cast<double>(n_img);
  return out;
}

ComplexField mollified_delta(const GridSpec& spec, double width) {
  ComplexField phi(spec, Space::Fourier);
  if (!(width > 0.0)) {
    phi[0] = spec.extent_nm * spec.extent_nm;
    return phi;
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < spec.n; ++r)
    for (std::size_t c = 0; c < spec.n; ++c) {
      const double g = std::exp(-norm_sq(spec.frequency(r, c)) / (2.0 * width * width));
      phi(r, c) = g;
      sum += g;
    }
  const double dv = spec.freq_step();
  phi *= 1.0 / (sum * dv * dv);
  return phi;
}

double convexity_probe(const Objective& objective, double width, std::span<const Vec2> t) {
  const ComplexField zero(objective.spec(), Space::Fourier);
  const ComplexField phi = apply_mask(mollified_delta(objective.spec(), width), objective.aperture());
  return objective.line_coefficients(zero, phi, t)[2];
}

}  // namespace ewr
