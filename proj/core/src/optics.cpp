#include "ewr/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ewr {

using std::numbers::pi;

void OpticalParams::validate() const {
  if (!(lambda_nm > 0.0) || !std::isfinite(lambda_nm)) throw std::invalid_argument("lambda_nm must be > 0");
  if (!std::isfinite(cs_nm)) throw std::invalid_argument("cs_nm must be finite");
  if (!(alpha_max_rad > 0.0) || !std::isfinite(alpha_max_rad))
    throw std::invalid_argument("alpha_max_rad must be > 0");
  if (!(delta_nm >= 0.0) || !std::isfinite(delta_nm)) throw std::invalid_argument("delta_nm must be >= 0");
  if (!(alpha_conv_rad >= 0.0) || !std::isfinite(alpha_conv_rad))
    throw std::invalid_argument("alpha_conv_rad must be >= 0");
}

double chi(Vec2 v, double focus_nm, const OpticalParams& p) {
  const double r2 = norm_sq(v);
  const double l = p.lambda_nm;
  return 0.5 * focus_nm * l * r2 + 0.25 * p.cs_nm * l * l * l * r2 * r2;
}

Vec2 chi_gradient(Vec2 v, double focus_nm, const OpticalParams& p) {
  const double l = p.lambda_nm;
  return (focus_nm * l + p.cs_nm * l * l * l * norm_sq(v)) * v;
}

cplx pupil(Vec2 v, double focus_nm, const OpticalParams& p) {
  return std::polar(1.0, -2.0 * pi * chi(v, focus_nm, p));
}

double aperture(Vec2 v, const OpticalParams& p) {
  return p.lambda_nm * norm(v) < p.alpha_max_rad ? 1.0 : 0.0;
}

double envelope_spatial(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p) {
  if (p.alpha_conv_rad == 0.0) return 1.0;
  const double c = pi * p.alpha_conv_rad / p.lambda_nm;
  return std::exp(-c * c * norm_sq(chi_gradient(v, focus_nm, p) - chi_gradient(w, focus_nm, p)));
}

double envelope_temporal(Vec2 v, Vec2 w, const OpticalParams& p) {
  if (p.delta_nm == 0.0) return 1.0;
  const double c = pi * p.delta_nm * p.lambda_nm;
  const double d = norm_sq(v) - norm_sq(w);
  return std::exp(-0.5 * c * c * d * d);
}

cplx tcc_ishizuka(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p) {
  const double a = aperture(v, p) * aperture(w, p);
  if (a == 0.0) return 0.0;
  return pupil(v, focus_nm, p) * std::conj(pupil(w, focus_nm, p)) *
         (envelope_spatial(v, w, focus_nm, p) * envelope_temporal(v, w, p));
}

cplx tcc_ishizuka_rank1(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p) {
  const double a = aperture(v, p) * aperture(w, p);
  if (a == 0.0) return 0.0;
  const double es = envelope_spatial(v, {}, focus_nm, p) * envelope_spatial(w, {}, focus_nm, p);
  return pupil(v, focus_nm, p) * std::conj(pupil(w, focus_nm, p)) * (es * envelope_temporal(v, w, p));
}

RealField aperture_mask(const GridSpec& spec, const OpticalParams& p) {
  RealField m(spec);
  for (std::size_t r = 0; r < spec.n; ++r)
    for (std::size_t c = 0; c < spec.n; ++c) m(r, c) = aperture(spec.frequency(r, c), p);
  return m;
}

}  // namespace ewr
