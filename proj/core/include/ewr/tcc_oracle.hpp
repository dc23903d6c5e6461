#pragma once

#include "ewr/optics.hpp"
#include "ewr/wcc.hpp"

#include <vector>

namespace ewr {

/// Gaussian illumination and focus-spread densities of the general TCC.
struct CoherenceDensities {
  /// Per-axis standard deviation of the illumination density s(u), 1/nm.
  double sigma_u = 0.1;
  /// Standard deviation of the focus-spread density f(z), nm.
  double sigma_f = 0.2;
};

/// One node of the product Riemann sum: shift u, focus offset z and the
/// cell weight delta_z delta_u^2 s(u) f(z).
struct RiemannTerm {
  Vec2 u;
  double z = 0.0;
  double weight = 0.0;
};

inline constexpr int oracle_max_m = 8;

/// (2M+1)^3 nodes with spacing 2 sigma / sqrt(M) on each axis, so the
/// covered range grows like sqrt(M) standard deviations while the cells
/// shrink. Throws std::invalid_argument for M outside [1, 8].
std::vector<RiemannTerm> riemann_terms(const CoherenceDensities& d, int m);
double riemann_weight_sum(const CoherenceDensities& d, int m);

/// Riemann-sum TCC a(v) a(w) sum w_k p_{Z+z_k}(v+u_k) conj(p_{Z+z_k}(w+u_k)).
cplx tcc_general_oracle(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p, int m,
                        const CoherenceDensities& d);
/// The same sum exposed as lattice factors a(v) sqrt(w_k) p_{Z+z_k}(v+u_k).
FactorList tcc_oracle_factors(const GridSpec& spec, double focus_nm, const OpticalParams& p, int m,
                              const CoherenceDensities& d);

/// High-accuracy value of the general TCC: the focus integral in closed form
/// and the illumination integral by tensor Gauss-Hermite quadrature.
cplx tcc_general_reference(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p,
                           const CoherenceDensities& d, int hermite_nodes = 40);

/// Gauss-Hermite nodes and weights for the weight exp(-x^2).
void gauss_hermite(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace ewr
