#include "ewr/analysis.hpp"

#include "ewr/errors.hpp"
#include "ewr/kernel.hpp"
#include "ewr/kv_file.hpp"
#include "ewr/spectral.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ewr {

using std::numbers::pi;

void ProbeReport::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

void ProbeReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out);
  if (!out) throw IoError("write failed for " + path.string());
}

void ProbeReport::write_summary(std::ostream& out) const {
  out << "probe " << name << ": " << (pass ? "PASS" : "FAIL") << '\n';
  for (const auto& [key, value] : scalars) out << "  " << key << " = " << format_double(value) << '\n';
  for (const auto& row : rows) {
    out << " ";
    for (std::size_t c = 0; c < row.size() && c < columns.size(); ++c)
      out << ' ' << columns[c] << '=' << format_double(row[c]);
    out << '\n';
  }
  if (!verdict_detail.empty()) out << "  " << verdict_detail << '\n';
}

namespace {

struct FilteredNorms {
  double norm_sq = 0.0;
  double squared_norm = 0.0;
  double tail_fraction = 0.0;
};

}  // namespace

ProbeReport coercivity_probe(const std::vector<double>& deltas, const CoercivityGrid& grid) {
  if (deltas.empty()) throw std::invalid_argument("coercivity probe: empty sweep");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 1.0)) throw std::invalid_argument("coercivity probe: deltas must exceed 1");
    if (i && !(deltas[i] > deltas[i - 1])) throw std::invalid_argument("coercivity probe: deltas must increase");
  }
  if (!(grid.spacing > 0.0) || grid.spacing > 0.5 || grid.padding < 2)
    throw std::invalid_argument("coercivity probe: grid must resolve the cutoff and be padded");

  const double h = grid.spacing;
  const double right = 4.0 * deltas.back();
  const auto window = static_cast<std::size_t>(std::llround((right - grid.left) / h)) + 1;
  const std::size_t total = window * static_cast<std::size_t>(grid.padding);
  const double pad = static_cast<double>(total - window);

  ProbeReport rep;
  rep.name = "coercivity";
  rep.columns = {"delta", "prefilter_norm_sq", "log_delta", "filtered_norm", "squared_norm", "tail_fraction"};
  rep.scalars = {{"band_lo", grid.band_lo}, {"band_hi", grid.band_hi}, {"tail_threshold", grid.tail_threshold}};

  std::vector<cplx> buf(total);
  for (double delta : deltas) {
    std::fill(buf.begin(), buf.end(), cplx{});
    double trap = 0.0;
    std::size_t first = total, last = 0;
    for (std::size_t k = 0; k < window; ++k) {
      const double x = grid.left + static_cast<double>(k) * h;
      if (x >= 1.0 - 1e-12 && x <= delta + 1e-12) {
        buf[k] = 1.0 / std::sqrt(x);
        trap += 1.0 / x;
        first = std::min(first, k);
        last = k;
      }
    }
    if (first > last) throw std::invalid_argument("coercivity probe: grid misses [1, delta]");
    const double x_first = grid.left + static_cast<double>(first) * h;
    const double x_last = grid.left + static_cast<double>(last) * h;
    trap = h * (trap - 0.5 * (1.0 / x_first + 1.0 / x_last));

    dft_1d(buf, -1);
    const double dxi = 1.0 / (static_cast<double>(total) * h);
    for (std::size_t k = 0; k < total; ++k) {
      const long long sk = k < total / 2 ? static_cast<long long>(k) : static_cast<long long>(k) - static_cast<long long>(total);
      if (std::abs(static_cast<double>(sk) * dxi) > 0.5) buf[k] = 0.0;
    }
    dft_1d(buf, 1);
    const double scale = 1.0 / static_cast<double>(total);

    double n2 = 0.0, n4 = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      const double a2 = std::norm(buf[k] * scale);
      n2 += a2;
      n4 += a2 * a2;
      if (k >= window) {
        const double dist = std::min(static_cast<double>(k - window + 1), static_cast<double>(total - k));
        if (dist > 0.25 * pad) tail += a2;
      }
    }
    FilteredNorms fn{h * n2, std::sqrt(h * n4), tail / n2};
    if (fn.tail_fraction > grid.tail_threshold) {
      std::ostringstream msg;
      msg << "coercivity probe: sinc tail estimate " << fn.tail_fraction << " exceeds " << grid.tail_threshold
          << "; increase padding";
      throw NumericalError(msg.str());
    }
    rep.rows.push_back({delta, trap, std::log(delta), std::sqrt(fn.norm_sq), fn.squared_norm, fn.tail_fraction});
  }

  bool increasing = true, banded = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (i && !(rep.rows[i][3] > rep.rows[i - 1][3])) increasing = false;
    const double sq = rep.rows[i][4];
    if (sq < grid.band_lo || sq > grid.band_hi) banded = false;
  }
  rep.pass = increasing && banded;
  rep.verdict_detail = std::string("filtered norm ") + (increasing ? "strictly increasing" : "NOT increasing") +
                       ", squared norm " + (banded ? "inside band" : "OUTSIDE band");
  return rep;
}

ProbeReport coercivity_probe_2d(const std::vector<double>& deltas) {
  const GridSpec spec{32, 16.0};
  ProbeReport rep;
  rep.name = "coercivity-2d";
  rep.columns = {"delta", "norm_sq", "squared_norm", "ratio"};
  for (double delta : deltas) {
    if (!(delta > 1.0) || delta >= 0.5 * spec.extent_nm)
      throw std::invalid_argument("2-D coercivity smoke: delta outside the representable range");
    ComplexField g(spec, Space::Real);
    for (std::size_t r = 0; r < spec.n; ++r)
      for (std::size_t c = 0; c < spec.n; ++c) {
        const Vec2 x = spec.position(r, c);
        if (x.x >= 1.0 && x.x <= delta && x.y >= 1.0 && x.y <= delta) g(r, c) = 1.0 / std::sqrt(x.x * x.y);
      }
    ComplexField f = spectral_transform(g);
    for (std::size_t r = 0; r < spec.n; ++r)
      for (std::size_t c = 0; c < spec.n; ++c) {
        const Vec2 v = spec.frequency(r, c);
        if (std::abs(v.x) > 0.5 || std::abs(v.y) > 0.5) f(r, c) = 0.0;
      }
    const ComplexField low = inverse_spectral_transform(f);
    ComplexField sq = low;
    for (auto& z : sq.values()) z *= z;
    const double n2 = l2_norm_sq(low);
    const double s = l2_norm(sq);
    rep.rows.push_back({delta, n2, s, n2 / s});
  }
  rep.pass = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i][3] > rep.rows[i - 1][3])) rep.pass = false;
  rep.verdict_detail = rep.pass ? "norm ratio increasing" : "norm ratio NOT increasing";
  return rep;
}

ProbeReport factorization_sweep(double focus_nm, const OpticalParams& p, const std::vector<int>& node_counts,
                                int radial_samples, double slack) {
  p.validate();
  if (node_counts.empty() || radial_samples < 2) throw std::invalid_argument("factorization sweep: empty sweep");
  ProbeReport rep;
  rep.name = "factorization";
  rep.columns = {"node_count", "sup_error"};
  rep.scalars = {{"focus_nm", focus_nm}, {"delta_nm", p.delta_nm}, {"slack", slack}};
  const double ra = p.aperture_radius();
  std::vector<double> radii(static_cast<std::size_t>(radial_samples));
  for (int i = 0; i < radial_samples; ++i) radii[i] = ra * i / radial_samples;

  for (int nodes : node_counts) {
    const FocalQuadrature q = focal_quadrature(p.delta_nm, nodes);
    double sup = 0.0;
    for (double rv : radii)
      for (double rw : radii) {
        const Vec2 v{rv, 0.0}, w{rw, 0.0};
        sup = std::max(sup, std::abs(kernel_eval(v, w, focus_nm, p, q) - tcc_ishizuka_rank1(v, w, focus_nm, p)));
      }
    rep.rows.push_back({static_cast<double>(nodes), sup});
  }
  rep.pass = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i][1] > rep.rows[i - 1][1] + slack) rep.pass = false;
  rep.verdict_detail = rep.pass ? "sup error non-increasing" : "sup error increased";
  return rep;
}

namespace {

std::vector<std::pair<Vec2, Vec2>> aperture_pairs(const OpticalParams& p, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double ra = p.aperture_radius();
  auto draw = [&] {
    for (;;) {
      const Vec2 v{ra * u(rng), ra * u(rng)};
      if (aperture(v, p) != 0.0) return v;
    }
  };
  std::vector<std::pair<Vec2, Vec2>> pairs;
  for (int i = 0; i < count; ++i) {
    const Vec2 v = draw();
    pairs.emplace_back(v, draw());
  }
  return pairs;
}

}  // namespace

ProbeReport oracle_sweep(double focus_nm, const OpticalParams& p, const CoherenceDensities& d,
                         const std::vector<int>& ms, int pairs, std::uint64_t seed) {
  if (ms.empty() || pairs < 1) throw std::invalid_argument("oracle sweep: empty sweep");
  const auto set = aperture_pairs(p, pairs, seed);
  std::vector<cplx> ref;
  for (const auto& [v, w] : set) ref.push_back(tcc_general_reference(v, w, focus_nm, p, d));

  ProbeReport rep;
  rep.name = "factorization-oracle";
  rep.columns = {"m", "sup_error", "weight_sum"};
  rep.scalars = {{"sigma_u", d.sigma_u}, {"sigma_f", d.sigma_f}, {"focus_nm", focus_nm}};
  for (int m : ms) {
    double sup = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i)
      sup = std::max(sup, std::abs(tcc_general_oracle(set[i].first, set[i].second, focus_nm, p, m, d) - ref[i]));
    rep.rows.push_back({static_cast<double>(m), sup, riemann_weight_sum(d, m)});
  }
  rep.pass = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i][1] > rep.rows[i - 1][1]) rep.pass = false;
  rep.verdict_detail = rep.pass ? "sup error non-increasing" : "sup error increased";
  return rep;
}

ProbeReport invariance_suite(const Objective& objective, const ComplexField& psi, const std::vector<Vec2>& t,
                             std::uint64_t seed, int count, double tolerance) {
  if (objective.regularizer().psi_m)
    throw ConfigError("invariance suite: gauge invariance needs a zero prior wave");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(-pi, pi);
  const double h = objective.spec().pixel_size();
  std::uniform_real_distribution<double> shift(-4.0 * h, 4.0 * h);

  const double e0 = objective.energy(psi, t).total;
  const double denom = std::max(std::abs(e0), std::numeric_limits<double>::min());
  ProbeReport rep;
  rep.name = "invariance";
  rep.columns = {"case", "kind", "phase_or_shift_x_nm", "shift_y_nm", "relative_deviation"};
  rep.scalars = {{"reference_energy", e0}, {"tolerance", tolerance}};
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const double c = phase(rng);
    ComplexField rotated = psi;
    rotated *= std::polar(1.0, c);
    const double dev = std::abs(objective.energy(rotated, t).total - e0) / denom;
    worst = std::max(worst, dev);
    rep.rows.push_back({static_cast<double>(i), 0.0, c, 0.0, dev});
  }
  for (int i = 0; i < count; ++i) {
    const Vec2 s{shift(rng), shift(rng)};
    std::vector<Vec2> ts = t;
    for (auto& tj : ts) tj += s;
    const double dev = std::abs(objective.energy(modulate(psi, s), ts).total - e0) / denom;
    worst = std::max(worst, dev);
    rep.rows.push_back({static_cast<double>(i), 1.0, s.x, s.y, dev});
  }
  rep.scalars.emplace_back("max_relative_deviation", worst);
  rep.pass = worst <= tolerance;
  rep.verdict_detail = "kind 0 = global phase, 1 = global modulation";
  return rep;
}

ProbeReport convexity_sweep(const Objective& objective, const std::vector<double>& widths,
                            const std::vector<Vec2>& t, double rel_tol) {
  if (widths.empty()) throw std::invalid_argument("convexity sweep: empty sweep");
  ProbeReport rep;
  rep.name = "convexity";
  rep.columns = {"width", "c2", "relative_gap"};
  const double target = objective.l1_limit();
  rep.scalars = {{"l1_limit", target}, {"rel_tol", rel_tol}};
  bool all_negative = true;
  for (double w : widths) {
    const double c2 = convexity_probe(objective, w, t);
    const double gap = target != 0.0 ? std::abs(c2 - target) / std::abs(target) : 0.0;
    rep.rows.push_back({w, c2, gap});
    if (!(c2 < 0.0)) all_negative = false;
  }
  if (target == 0.0) {
    rep.pass = false;
    rep.verdict_detail = "convex case: all images vanish, C2 >= 0";
    return rep;
  }
  const bool close = rep.rows.back()[2] <= rel_tol;
  rep.pass = all_negative && close;
  rep.verdict_detail = std::string(all_negative ? "C2 < 0 for every width (not convex)" : "some C2 >= 0") +
                       (close ? ", narrowest width within tolerance of the L1 limit"
                              : ", narrowest width NOT within tolerance of the L1 limit");
  return rep;
}

ComplexField random_wave(const GridSpec& spec, const OpticalParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexField psi(spec, Space::Fourier);
  for (std::size_t r = 0; r < spec.n; ++r)
    for (std::size_t c = 0; c < spec.n; ++c) {
      const double a = aperture(spec.frequency(r, c), p);
      const double re = n(rng), im = n(rng);
      psi(r, c) = a * cplx{re, im};
    }
  // Rescale to real-space rms 0.3 around a unit plane wave.
  const double rms = std::sqrt(l2_norm_sq(psi)) / spec.extent_nm;
  if (rms > 0.0) psi *= 0.3 / rms;
  psi[0] += spec.extent_nm * spec.extent_nm;
  return psi;
}

}  // namespace ewr
