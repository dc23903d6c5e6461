#pragma once

#include "ewr/field.hpp"

#include <functional>
#include <vector>

namespace ewr {

/// Explicit table w(x, y) over all lattice pairs of a small grid (n <= 16).
/// Entry (a, b) couples storage indices a and b.
class WeightMatrix {
 public:
  static constexpr std::size_t max_n = 16;

  WeightMatrix(GridSpec spec, Space space);
  /// Tabulate w(coord(a), coord(b)) from a pointwise function of physical coordinates.
  static WeightMatrix from_function(GridSpec spec, Space space,
                                    const std::function<cplx(Vec2, Vec2)>& w);
  static WeightMatrix constant(GridSpec spec, Space space, cplx value);

  const GridSpec& spec() const { return spec_; }
  Space space() const { return space_; }
  cplx& operator()(std::size_t a, std::size_t b) { return w_[a * spec_.size() + b]; }
  cplx operator()(std::size_t a, std::size_t b) const { return w_[a * spec_.size() + b]; }

  double sup_abs() const;
  bool is_hermitian(double tol) const;

 private:
  GridSpec spec_;
  Space space_;
  std::vector<cplx> w_;
};

/// Factors v_j of a weight w(x, y) = sum_j v_j(x) conj(v_j(y)).
struct FactorList {
  std::vector<ComplexField> factors;

  bool empty() const { return factors.empty(); }
  std::size_t size() const { return factors.size(); }
  /// sum_j v_j(a) conj(v_j(b)) at storage indices a, b.
  cplx weight(std::size_t a, std::size_t b) const;
  WeightMatrix to_matrix() const;
};

/// Direct O(n^4) evaluation of
///   out(x) = sum_y conj(f(y)) g(x + y) w(x + y, y) * cell_area
/// with periodic indexing. Refuses grids larger than WeightMatrix::max_n.
ComplexField wcc_direct(const ComplexField& f, const ComplexField& g, const WeightMatrix& w);

/// Unweighted cross-correlation through the convolution theorem. Fourier-space
/// inputs use F(conj(F^-1 f) F^-1 g); real-space inputs F^-1(conj(F f) F g).
ComplexField xcorr_spectral(const ComplexField& f, const ComplexField& g);

/// sum_j (f v_j) * (g v_j). Linear in g, conjugate-linear in f. An empty list
/// yields the zero field.
ComplexField wcc_factorized(const ComplexField& f, const ComplexField& g, const FactorList& k);

}  // namespace ewr
