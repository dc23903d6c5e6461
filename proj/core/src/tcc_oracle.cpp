#include "ewr/tcc_oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ewr {

using std::numbers::pi;

namespace {

double gauss_pdf(double x, double sigma) {
  return std::exp(-0.5 * (x / sigma) * (x / sigma)) / (sigma * std::sqrt(2.0 * pi));
}

void check_densities(const CoherenceDensities& d) {
  if (!(d.sigma_u > 0.0) || !(d.sigma_f > 0.0))
    throw std::invalid_argument("coherence densities need positive widths");
}

}  // namespace

std::vector<RiemannTerm> riemann_terms(const CoherenceDensities& d, int m) {
  if (m < 1 || m > oracle_max_m) throw std::invalid_argument("Riemann oracle: M must lie in [1, 8]");
  check_densities(d);
  const double du = 2.0 * d.sigma_u / std::sqrt(static_cast<double>(m));
  const double dz = 2.0 * d.sigma_f / std::sqrt(static_cast<double>(m));
  std::vector<RiemannTerm> terms;
  terms.reserve(static_cast<std::size_t>((2 * m + 1) * (2 * m + 1) * (2 * m + 1)));
  for (int a = -m; a <= m; ++a)
    for (int b = -m; b <= m; ++b)
      for (int c = -m; c <= m; ++c) {
        const Vec2 u{b * du, c * du};
        const double z = a * dz;
        const double w = dz * du * du * gauss_pdf(u.x, d.sigma_u) * gauss_pdf(u.y, d.sigma_u) *
                         gauss_pdf(z, d.sigma_f);
        terms.push_back({u, z, w});
      }
  return terms;
}

double riemann_weight_sum(const CoherenceDensities& d, int m) {
  double s = 0.0;
  for (const auto& t : riemann_terms(d, m)) s += t.weight;
  return s;
}

cplx tcc_general_oracle(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p, int m,
                        const CoherenceDensities& d) {
  const auto terms = riemann_terms(d, m);
  if (aperture(v, p) * aperture(w, p) == 0.0) return 0.0;
  cplx acc{};
  for (const auto& t : terms)
    acc += t.weight * pupil(v + t.u, focus_nm + t.z, p) * std::conj(pupil(w + t.u, focus_nm + t.z, p));
  return acc;
}

FactorList tcc_oracle_factors(const GridSpec& spec, double focus_nm, const OpticalParams& p, int m,
                              const CoherenceDensities& d) {
  spec.validate();
  FactorList list;
  for (const auto& t : riemann_terms(d, m)) {
    ComplexField f(spec, Space::Fourier);
    const double amp = std::sqrt(t.weight);
    for (std::size_t r = 0; r < spec.n; ++r)
      for (std::size_t c = 0; c < spec.n; ++c) {
        const Vec2 v = spec.frequency(r, c);
        if (aperture(v, p) != 0.0) f(r, c) = amp * pupil(v + t.u, focus_nm + t.z, p);
      }
    list.factors.push_back(std::move(f));
  }
  return list;
}

void gauss_hermite(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw std::invalid_argument("gauss_hermite: count must be positive");
  // Golub-Welsch: eigenpairs of the Jacobi matrix of the Hermite recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int i = 1; i < count; ++i) {
    const double b = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes.resize(count);
  weights.resize(count);
  for (int i = 0; i < count; ++i) {
    nodes[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    weights[i] = std::sqrt(pi) * v0 * v0;
  }
}

cplx tcc_general_reference(Vec2 v, Vec2 w, double focus_nm, const OpticalParams& p,
                           const CoherenceDensities& d, int hermite_nodes) {
  check_densities(d);
  if (aperture(v, p) * aperture(w, p) == 0.0) return 0.0;
  std::vector<double> x, q;
  gauss_hermite(hermite_nodes, x, q);
  const double c = pi * d.sigma_f * p.lambda_nm;
  cplx acc{};
  for (int i = 0; i < hermite_nodes; ++i)
    for (int k = 0; k < hermite_nodes; ++k) {
      const Vec2 u{std::sqrt(2.0) * d.sigma_u * x[i], std::sqrt(2.0) * d.sigma_u * x[k]};
      const Vec2 a = v + u, b = w + u;
      const double diff = norm_sq(a) - norm_sq(b);
      const double focus_factor = std::exp(-0.5 * c * c * diff * diff);
      acc += (q[i] * q[k] / pi) * focus_factor * pupil(a, focus_nm, p) * std::conj(pupil(b, focus_nm, p));
    }
  return acc;
}

}  // namespace ewr
