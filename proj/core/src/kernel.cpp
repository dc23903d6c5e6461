#include "ewr/kernel.hpp"

#include "ewr/errors.hpp"
#include "ewr/field_io.hpp"
#include "ewr/kv_file.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ewr {

FocalQuadrature focal_quadrature(double delta_nm, int n_focal) {
  if (n_focal < 1 || n_focal % 2 == 0) throw std::invalid_argument("n_focal must be a positive odd integer");
  if (!(delta_nm >= 0.0)) throw std::invalid_argument("focus spread must be >= 0");
  if (delta_nm == 0.0 || n_focal == 1) return {{0.0}, {1.0}};

  FocalQuadrature q;
  const int half = n_focal / 2;
  const double spacing = 3.0 * delta_nm / half;
  double total = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double z = i * spacing;
    const double w = std::exp(-0.5 * (z / delta_nm) * (z / delta_nm));
    q.nodes_nm.push_back(z);
    q.weights.push_back(w);
    total += w;
  }
  for (auto& w : q.weights) w /= total;
  return q;
}

cplx kernel_factor(Vec2 v, double focus_nm, const OpticalParams& p, double node_nm, double weight) {
  if (aperture(v, p) == 0.0) return 0.0;
  return std::sqrt(weight) * envelope_spatial(v, {}, focus_nm, p) * pupil(v, focus_nm + node_nm, p);
}

cplx kernel_eval(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p, const FocalQuadrature& q) {
  cplx acc{};
  for (std::size_t j = 0; j < q.nodes_nm.size(); ++j)
    acc += kernel_factor(v, focus_nm, p, q.nodes_nm[j], q.weights[j]) *
           std::conj(kernel_factor(w, focus_nm, p, q.nodes_nm[j], q.weights[j]));
  return acc;
}

FactorizedKernel build_factorized_kernel(const GridSpec& spec, double focus_nm, const OpticalParams& p,
                                         int n_focal) {
  spec.validate();
  p.validate();
  FactorizedKernel k;
  k.focus_nm = focus_nm;
  k.quadrature = focal_quadrature(p.delta_nm, n_focal);
  for (std::size_t j = 0; j < k.quadrature.nodes_nm.size(); ++j) {
    ComplexField t(spec, Space::Fourier);
    for (std::size_t r = 0; r < spec.n; ++r)
      for (std::size_t c = 0; c < spec.n; ++c)
        t(r, c) = kernel_factor(spec.frequency(r, c), focus_nm, p, k.quadrature.nodes_nm[j],
                                k.quadrature.weights[j]);
    k.factors.factors.push_back(std::move(t));
  }
  return k;
}

void dump_kernel(const std::filesystem::path& dir, const FactorizedKernel& k, const OpticalParams& p) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  KeyValueFile manifest;
  manifest.set("kernel.focus_nm", k.focus_nm);
  manifest.set("kernel.node_count", static_cast<long long>(k.node_count()));
  manifest.set("kernel.nodes_nm", k.quadrature.nodes_nm);
  manifest.set("kernel.weights", k.quadrature.weights);
  manifest.set("grid.n", static_cast<long long>(k.spec().n));
  manifest.set("grid.extent_nm", k.spec().extent_nm);
  manifest.set("optics.lambda_nm", p.lambda_nm);
  manifest.set("optics.cs_nm", p.cs_nm);
  manifest.set("optics.alpha_max_rad", p.alpha_max_rad);
  manifest.set("optics.delta_nm", p.delta_nm);
  manifest.set("optics.alpha_conv_rad", p.alpha_conv_rad);
  for (std::size_t j = 0; j < k.node_count(); ++j) {
    char name[32];
    std::snprintf(name, sizeof name, "factor_%03zu", j);
    write_field(dir / name, k.factors.factors[j]);
  }
  manifest.save(dir / "manifest.txt");
}

}  // namespace ewr
