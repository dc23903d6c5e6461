#pragma once

#include "ewr/optics.hpp"
#include "ewr/wcc.hpp"

#include <filesystem>
#include <vector>

namespace ewr {

/// Nodes and nonnegative weights (summing to 1) discretizing the Gaussian
/// focus-spread density.
struct FocalQuadrature {
  std::vector<double> nodes_nm;
  std::vector<double> weights;
};

/// n_focal uniform nodes on [-3 Delta, 3 Delta] weighted by the density and
/// renormalized. Delta = 0 collapses to the single node 0. Throws
/// std::invalid_argument for even or non-positive n_focal.
FocalQuadrature focal_quadrature(double delta_nm, int n_focal);

/// Factors t_j with T_Z(v, w) ~ sum_j t_j(v) conj(t_j(w)) on the lattice.
struct FactorizedKernel {
  double focus_nm = 0.0;
  FocalQuadrature quadrature;
  FactorList factors;

  std::size_t node_count() const { return factors.size(); }
  const GridSpec& spec() const { return factors.factors.front().spec(); }
};

FactorizedKernel build_factorized_kernel(const GridSpec& spec, double focus_nm, const OpticalParams& p,
                                         int n_focal);

/// Value of a single kernel factor at an arbitrary frequency: the continuous
/// counterpart of the lattice field stored in FactorizedKernel.
cplx kernel_factor(Vec2 v, double focus_nm, const OpticalParams& p, double node_nm, double weight);
/// sum_j t_j(v) conj(t_j(w)) at arbitrary frequencies.
cplx kernel_eval(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p, const FocalQuadrature& q);

/// Writes factor_NNN field files plus manifest.txt (focus, nodes, weights, grid, optics).
void dump_kernel(const std::filesystem::path& dir, const FactorizedKernel& k, const OpticalParams& p);

}  // namespace ewr
