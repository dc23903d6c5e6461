#include "ewr/wcc.hpp"

#include "ewr/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace ewr {
namespace {

void require_match(const ComplexField& f, const ComplexField& g, const char* what) {
  if (f.spec() != g.spec() || f.space() != g.space())
    throw std::invalid_argument(std::string(what) + ": grid or space mismatch");
}

Space other(Space s) { return s == Space::Real ? Space::Fourier : Space::Real; }

ComplexField flip(const ComplexField& f) {
  return f.space() == Space::Real ? spectral_transform(f) : inverse_spectral_transform(f);
}

}  // namespace

WeightMatrix::WeightMatrix(GridSpec spec, Space space) : spec_(spec), space_(space) {
  spec_.validate();
  if (spec_.n > max_n) throw std::invalid_argument("WeightMatrix: grid exceeds oracle size 16");
  w_.assign(spec_.size() * spec_.size(), cplx{});
}

WeightMatrix WeightMatrix::from_function(GridSpec spec, Space space,
                                         const std::function<cplx(Vec2, Vec2)>& w) {
  WeightMatrix m(spec, space);
  const std::size_t n = spec.n;
  auto coord = [&](std::size_t a) {
    return space == Space::Real ? spec.position(a / n, a % n) : spec.frequency(a / n, a % n);
  };
  for (std::size_t a = 0; a < spec.size(); ++a)
    for (std::size_t b = 0; b < spec.size(); ++b) m(a, b) = w(coord(a), coord(b));
  return m;
}

WeightMatrix WeightMatrix::constant(GridSpec spec, Space space, cplx value) {
  WeightMatrix m(spec, space);
  std::fill(m.w_.begin(), m.w_.end(), value);
  return m;
}

double WeightMatrix::sup_abs() const {
  double s = 0.0;
  for (const auto& z : w_) s = std::max(s, std::abs(z));
  return s;
}

bool WeightMatrix::is_hermitian(double tol) const {
  for (std::size_t a = 0; a < spec_.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b)
      if (std::abs((*this)(a, b) - std::conj((*this)(b, a))) > tol) return false;
  return true;
}

cplx FactorList::weight(std::size_t a, std::size_t b) const {
  cplx acc{};
  for (const auto& v : factors) acc += v[a] * std::conj(v[b]);
  return acc;
}

WeightMatrix FactorList::to_matrix() const {
  if (factors.empty()) throw std::invalid_argument("FactorList::to_matrix: empty list");
  WeightMatrix m(factors.front().spec(), factors.front().space());
  const std::size_t size = m.spec().size();
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b < size; ++b) m(a, b) = weight(a, b);
  return m;
}

ComplexField wcc_direct(const ComplexField& f, const ComplexField& g, const WeightMatrix& w) {
  require_match(f, g, "wcc_direct");
  if (f.n() > WeightMatrix::max_n) throw std::invalid_argument("wcc_direct: grid exceeds oracle size 16");
  if (w.spec() != f.spec() || w.space() != f.space())
    throw std::invalid_argument("wcc_direct: weight grid mismatch");
  const GridSpec& s = f.spec();
  const std::size_t n = s.n;
  ComplexField out(s, f.space());
  for (std::size_t xr = 0; xr < n; ++xr)
    for (std::size_t xc = 0; xc < n; ++xc) {
      cplx acc{};
      for (std::size_t yr = 0; yr < n; ++yr)
        for (std::size_t yc = 0; yc < n; ++yc) {
          const std::size_t sr = (xr + yr) % n, sc = (xc + yc) % n;
          acc += std::conj(f(yr, yc)) * g(sr, sc) * w(sr * n + sc, yr * n + yc);
        }
      out(xr, xc) = acc * f.cell_area();
    }
  return out;
}

ComplexField xcorr_spectral(const ComplexField& f, const ComplexField& g) {
  require_match(f, g, "xcorr_spectral");
  ComplexField a = flip(f);
  const ComplexField b = flip(g);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::conj(a[i]) * b[i];
  return flip(a);
}

ComplexField wcc_factorized(const ComplexField& f, const ComplexField& g, const FactorList& k) {
  require_match(f, g, "wcc_factorized");
  ComplexField acc(f.spec(), other(f.space()));
  for (const auto& v : k.factors) {
    if (v.spec() != f.spec()) throw std::invalid_argument("wcc_factorized: factor grid mismatch");
    ComplexField fv = f;
    fv.multiply(v);
    ComplexField gv = g;
    gv.multiply(v);
    const ComplexField a = flip(fv);
    const ComplexField b = flip(gv);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::conj(a[i]) * b[i];
  }
  if (k.empty()) return ComplexField(f.spec(), f.space());
  return flip(acc);
}

}  // namespace ewr
