#include "ewr/field.hpp"

#include "ewr/diagnostics.hpp"
#include "ewr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ewr {
namespace {

void require_same_grid(const ComplexField& a, const ComplexField& b, const char* what) {
  if (a.spec() != b.spec() || a.space() != b.space())
    throw std::invalid_argument(std::string(what) + ": grid or space mismatch");
}

}  // namespace

ComplexField::ComplexField(GridSpec spec, Space space)
    : spec_(spec), space_(space), values_(spec.size()) {
  spec_.validate();
}

ComplexField::ComplexField(GridSpec spec, Space space, std::vector<cplx> values)
    : spec_(spec), space_(space), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size())
    throw std::invalid_argument("ComplexField: value count does not match grid");
  if (!all_finite()) throw NumericalError("ComplexField: non-finite sample");
}

double ComplexField::cell_area() const {
  const double d = space_ == Space::Real ? spec_.pixel_size() : spec_.freq_step();
  return d * d;
}

Vec2 ComplexField::coordinate(std::size_t row, std::size_t col) const {
  return space_ == Space::Real ? spec_.position(row, col) : spec_.frequency(row, col);
}

bool ComplexField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  require_same_grid(*this, o, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  require_same_grid(*this, o, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ComplexField& ComplexField::multiply(const ComplexField& o) {
  if (spec_ != o.spec_) throw std::invalid_argument("pointwise product: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

RealField::RealField(GridSpec spec) : spec_(spec), values_(spec.size(), 0.0) { spec_.validate(); }

RealField::RealField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size())
    throw std::invalid_argument("RealField: value count does not match grid");
  if (!all_finite()) throw NumericalError("RealField: non-finite sample");
}

bool RealField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double RealField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RealField::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

ComplexField to_complex(const RealField& f) {
  std::vector<cplx> v(f.values().begin(), f.values().end());
  return ComplexField(f.spec(), Space::Real, std::move(v));
}

RealField real_part(const ComplexField& f, double rel_tol) {
  if (f.space() != Space::Real) throw std::invalid_argument("real_part: field is not real-space");
  double max_mag = 0.0;
  double max_imag = 0.0;
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    max_mag = std::max(max_mag, std::abs(f[i]));
    max_imag = std::max(max_imag, std::abs(f[i].imag()));
    out[i] = f[i].real();
  }
  if (max_imag > rel_tol * max_mag) {
    std::ostringstream msg;
    msg << "real_part: imaginary residue " << max_imag << " exceeds " << rel_tol << " * " << max_mag;
    throw NumericalError(msg.str());
  }
  return RealField(f.spec(), std::move(out));
}

cplx inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f, g, "inner_product");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::conj(f[i]) * g[i];
  return acc * f.cell_area();
}

double l2_norm_sq(const ComplexField& f) {
  double acc = 0.0;
  for (const auto& z : f.values()) acc += std::norm(z);
  return acc * f.cell_area();
}

double l2_norm(const ComplexField& f) { return std::sqrt(l2_norm_sq(f)); }

double inner_product(const RealField& f, const RealField& g) {
  if (f.spec() != g.spec()) throw std::invalid_argument("inner_product: grid mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
  const double h = f.spec().pixel_size();
  return acc * h * h;
}

double l2_norm_sq(const RealField& f) { return inner_product(f, f); }

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

RealField band_mask(const GridSpec& spec, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("band_mask: radius must be positive");
  if (radius > spec.nyquist()) {
    std::ostringstream msg;
    msg << "band_mask radius " << radius << " exceeds Nyquist " << spec.nyquist() << "; mask saturates";
    warn(msg.str());
  }
  RealField mask(spec);
  const double r2 = radius * radius;
  for (std::size_t row = 0; row < spec.n; ++row)
    for (std::size_t col = 0; col < spec.n; ++col)
      mask(row, col) = norm_sq(spec.frequency(row, col)) < r2 ? 1.0 : 0.0;
  return mask;
}

ComplexField apply_mask(ComplexField f, const RealField& mask) {
  if (f.spec() != mask.spec()) throw std::invalid_argument("apply_mask: grid mismatch");
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= mask[i];
  return f;
}

ComplexField modulate(const ComplexField& f, Vec2 shift_nm) {
  if (f.space() != Space::Fourier) throw std::invalid_argument("modulate: field must be Fourier-space");
  const GridSpec& s = f.spec();
  // exp(2 pi i v.shift) separates into row and column phase factors.
  std::vector<cplx> px(s.n), py(s.n);
  for (std::size_t k = 0; k < s.n; ++k) {
    const double v = s.signed_index(k) * s.freq_step();
    px[k] = std::polar(1.0, 2.0 * std::numbers::pi * v * shift_nm.x);
    py[k] = std::polar(1.0, 2.0 * std::numbers::pi * v * shift_nm.y);
  }
  ComplexField out = f;
  for (std::size_t row = 0; row < s.n; ++row)
    for (std::size_t col = 0; col < s.n; ++col) out(row, col) *= py[row] * px[col];
  return out;
}

ComplexField circular_shift(const ComplexField& f, long long shift_rows, long long shift_cols) {
  const GridSpec& s = f.spec();
  ComplexField out(s, f.space());
  for (std::size_t row = 0; row < s.n; ++row)
    for (std::size_t col = 0; col < s.n; ++col)
      out(row, col) = f(s.wrap(static_cast<long long>(row) + shift_rows),
                        s.wrap(static_cast<long long>(col) + shift_cols));
  return out;
}

namespace {

template <class Field, class Make>
Field crop_impl(const Field& f, const GridSpec& small, Make make) {
  const GridSpec& big = f.spec();
  small.validate();
  const std::size_t n = small.n;
  if (n > big.n) throw std::invalid_argument("crop_center: target larger than source");
  if (std::abs(small.pixel_size() - big.pixel_size()) > 1e-12 * big.pixel_size())
    throw std::invalid_argument("crop_center: pixel size mismatch");
  Field out = make(small);
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t col = 0; col < n; ++col)
      out(row, col) = f(big.wrap(small.signed_index(row)), big.wrap(small.signed_index(col)));
  return out;
}

}  // namespace

RealField crop_center(const RealField& f, const GridSpec& target) {
  return crop_impl(f, target, [](const GridSpec& s) { return RealField(s); });
}

ComplexField crop_center(const ComplexField& f, const GridSpec& target) {
  if (f.space() != Space::Real) throw std::invalid_argument("crop_center: field must be real-space");
  return crop_impl(f, target, [](const GridSpec& s) { return ComplexField(s, Space::Real); });
}

}  // namespace ewr
