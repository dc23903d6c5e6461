#include "ewr/optimizer.hpp"

#include "ewr/diagnostics.hpp"
#include "ewr/errors.hpp"
#include "ewr/kv_file.hpp"
#include "ewr/spectral.hpp"
#include "ewr/wcc.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace ewr {

using std::numbers::pi;

void SolverConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
  if (!(epsilon_stop > 0.0)) throw ConfigError("epsilon_stop must be > 0");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
  if (!(armijo_sigma > 0.0 && armijo_sigma < 1.0)) throw ConfigError("armijo_sigma must lie in (0, 1)");
  if (!(armijo_backtrack > 0.0 && armijo_backtrack < 1.0))
    throw ConfigError("armijo_backtrack must lie in (0, 1)");
  if (!(armijo_initial_step > 0.0)) throw ConfigError("armijo_initial_step must be > 0");
  if (armijo_max_backtracks < 1) throw ConfigError("armijo_max_backtracks must be >= 1");
  if (restart_period < 1) throw ConfigError("restart_period must be >= 1");
  if (!(translation_bound_nm >= 0.0)) throw ConfigError("translation_bound_nm must be >= 0");
  if (!(translation_scale_nm >= 0.0)) throw ConfigError("translation_scale_nm must be >= 0");
  if (exact_line_search && !freeze_translations)
    throw ConfigError("exact_line_search needs freeze_translations");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::EnergyStalled: return "energy-stalled";
    case StopReason::Stationary: return "stationary";
    case StopReason::MaxIterations: return "max-iterations";
    case StopReason::BoundStall: return "bound-stall";
    case StopReason::LineSearchFailure: return "line-search-failure";
  }
  return "unknown";
}

ComplexField init_wave(const FocusSeries& series) {
  series.validate();
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& g : series.images) {
    sum += g.sum();
    count += g.size();
  }
  const double mean = sum / static_cast<double>(count);
  if (mean < 0.0) throw NumericalError("init_wave: negative mean intensity");
  ComplexField psi(series.spec, Space::Fourier);
  psi[0] = std::sqrt(mean) * series.spec.extent_nm * series.spec.extent_nm;
  return psi;
}

namespace {

double parabola_offset(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (!(denom < 0.0)) return 0.0;
  const double off = 0.5 * (left - right) / denom;
  return std::clamp(off, -0.5, 0.5);
}

}  // namespace

std::vector<Vec2> init_translations(const FocusSeries& series, bool subpixel) {
  series.validate();
  const GridSpec& s = series.spec;
  const double h = s.pixel_size();
  auto centered = [](const RealField& g) {
    ComplexField c = to_complex(g);
    const cplx mean = g.sum() / static_cast<double>(g.size());
    for (auto& v : c.values()) v -= mean;
    return c;
  };

  std::vector<Vec2> t(series.size());
  ComplexField prev = centered(series.images[0]);
  for (std::size_t j = 1; j < series.size(); ++j) {
    ComplexField cur = centered(series.images[j]);
    const ComplexField xc = xcorr_spectral(prev, cur);
    std::size_t best = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < xc.size(); ++i) {
      const double v = xc[i].real();
      lo = std::min(lo, v);
      if (v > hi) {
        hi = v;
        best = i;
      }
    }
    Vec2 step;
    if (!(hi - lo > 1e-12 * std::max(std::abs(hi), std::abs(lo))) || hi <= 0.0) {
      warn("init_translations: flat correlation for image " + std::to_string(j) + ", assuming zero shift");
    } else {
      const std::size_t row = best / s.n, col = best % s.n;
      double dx = s.signed_index(col), dy = s.signed_index(row);
      if (subpixel) {
        auto at = [&](long long r, long long c) { return xc(s.wrap(r), s.wrap(c)).real(); };
        const auto r = static_cast<long long>(row), c = static_cast<long long>(col);
        dx += parabola_offset(at(r, c - 1), hi, at(r, c + 1));
        dy += parabola_offset(at(r - 1, c), hi, at(r + 1, c));
      }
      step = {dx * h, dy * h};
    }
    t[j] = t[j - 1] + step;
    prev = std::move(cur);
  }
  return t;
}

GaugeFit fit_gauge(const ComplexField& est, const ComplexField& ref) {
  if (est.spec() != ref.spec() || est.space() != Space::Fourier || ref.space() != Space::Fourier)
    throw std::invalid_argument("gauge_align: waves must be Fourier-space on one grid");
  GaugeFit fit;
  if (max_abs(ref) == 0.0) return fit;
  const GridSpec& s = ref.spec();
  const double h = s.pixel_size();

  // Coarse shift: est(x) ~ ref(x + s) puts the correlation peak at lag -s.
  const ComplexField xc = xcorr_spectral(inverse_spectral_transform(ref), inverse_spectral_transform(est));
  std::size_t best = 0;
  for (std::size_t i = 1; i < xc.size(); ++i)
    if (std::abs(xc[i]) > std::abs(xc[best])) best = i;
  const auto row = static_cast<long long>(best / s.n), col = static_cast<long long>(best % s.n);
  auto mag = [&](long long r, long long c) { return std::abs(xc(s.wrap(r), s.wrap(c))); };
  const double px = s.signed_index(static_cast<std::size_t>(col)) +
                    parabola_offset(mag(row, col - 1), mag(row, col), mag(row, col + 1));
  const double py = s.signed_index(static_cast<std::size_t>(row)) +
                    parabola_offset(mag(row - 1, col), mag(row, col), mag(row + 1, col));
  Vec2 shift{-px * h, -py * h};

  // Newton refinement of |f(s)|^2 with f(s) = <ref, est mu_{-s}>.
  const double dv2 = s.freq_step() * s.freq_step();
  std::vector<cplx> prod(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) prod[i] = std::conj(ref[i]) * est[i];
  auto eval = [&](Vec2 sh, cplx& f, cplx& fx, cplx& fy, cplx& fxx, cplx& fxy, cplx& fyy) {
    f = fx = fy = fxx = fxy = fyy = 0.0;
    for (std::size_t r = 0; r < s.n; ++r)
      for (std::size_t c = 0; c < s.n; ++c) {
        const std::size_t i = r * s.n + c;
        if (prod[i] == 0.0) continue;
        const Vec2 v = s.frequency(r, c);
        const cplx term = prod[i] * std::polar(1.0, -2.0 * pi * dot(v, sh));
        const cplx ax = cplx{0.0, -2.0 * pi * v.x}, ay = cplx{0.0, -2.0 * pi * v.y};
        f += term;
        fx += ax * term;
        fy += ay * term;
        fxx += ax * ax * term;
        fxy += ax * ay * term;
        fyy += ay * ay * term;
      }
    f *= dv2, fx *= dv2, fy *= dv2, fxx *= dv2, fxy *= dv2, fyy *= dv2;
  };
  const Vec2 start = shift;
  for (int it = 0; it < 20; ++it) {
    cplx f, fx, fy, fxx, fxy, fyy;
    eval(shift, f, fx, fy, fxx, fxy, fyy);
    const double gx = 2.0 * (std::conj(f) * fx).real(), gy = 2.0 * (std::conj(f) * fy).real();
    const double hxx = 2.0 * (std::norm(fx) + (std::conj(f) * fxx).real());
    const double hyy = 2.0 * (std::norm(fy) + (std::conj(f) * fyy).real());
    const double hxy = 2.0 * ((std::conj(fx) * fy).real() + (std::conj(f) * fxy).real());
    const double det = hxx * hyy - hxy * hxy;
    if (!(hxx < 0.0 && det > 0.0)) break;
    const Vec2 delta{-(hyy * gx - hxy * gy) / det, -(hxx * gy - hxy * gx) / det};
    const Vec2 next = shift + delta;
    if (std::abs(next.x - start.x) > h || std::abs(next.y - start.y) > h) break;
    shift = next;
    if (norm(delta) <= 1e-15 * std::max(h, norm(shift))) break;
  }
  fit.shift_nm = shift;
  fit.phase = std::arg(inner_product(ref, modulate(est, -shift)));
  return fit;
}

ComplexField gauge_align(const ComplexField& est, const ComplexField& ref) {
  const GaugeFit fit = fit_gauge(est, ref);
  ComplexField out = modulate(est, -fit.shift_nm);
  out *= std::polar(1.0, -fit.phase);
  return out;
}

WaveError wave_error(const ComplexField& est, const ComplexField& ref, double band_radius) {
  const ComplexField aligned = gauge_align(est, ref);
  const ComplexField diff = aligned - ref;
  WaveError e;
  const double ref_sup = max_abs(inverse_spectral_transform(ref));
  e.sup = ref_sup > 0.0 ? max_abs(inverse_spectral_transform(diff)) / ref_sup : 0.0;
  const RealField band = band_mask(ref.spec(), band_radius);
  const double ref_norm = l2_norm(apply_mask(ref, band));
  e.euc = ref_norm > 0.0 ? l2_norm(apply_mask(diff, band)) / ref_norm : 0.0;
  return e;
}

namespace {

// Positive s minimizing c0 + c1 s + ... + c4 s^4, or 0 if the quartic does
// not decrease for s > 0.
double quartic_argmin(const std::array<double, 5>& c) {
  auto value = [&](double s) { return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * c[4]))); };
  if (!(c[4] > 0.0)) return 0.0;
  // Roots of c1 + 2 c2 s + 3 c3 s^2 + 4 c4 s^3 via the companion matrix.
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  m(0, 2) = -c[1] / (4.0 * c[4]);
  m(1, 2) = -2.0 * c[2] / (4.0 * c[4]);
  m(2, 2) = -3.0 * c[3] / (4.0 * c[4]);
  const Eigen::Vector3cd roots = m.eigenvalues();
  double best = 0.0, best_value = value(0.0);
  for (const auto& r : roots) {
    if (std::abs(r.imag()) > 1e-9 * std::max(1.0, std::abs(r.real())) || !(r.real() > 0.0)) continue;
    const double v = value(r.real());
    if (v < best_value) {
      best = r.real();
      best_value = v;
    }
  }
  return best;
}

// Packed CG vector: wave in Fourier space plus scaled free translations.
struct Packed {
  ComplexField psi;
  std::vector<Vec2> tau;
};

double dot(const Packed& a, const Packed& b) {
  double s = inner_product(a.psi, b.psi).real();
  for (std::size_t j = 0; j < a.tau.size(); ++j) s += ewr::dot(a.tau[j], b.tau[j]);
  return s;
}

Packed scaled(const Packed& a, double s) {
  Packed out = a;
  out.psi *= s;
  for (auto& t : out.tau) t *= s;
  return out;
}

void axpy(Packed& y, double a, const Packed& x) {
  for (std::size_t i = 0; i < y.psi.size(); ++i) y.psi[i] += a * x.psi[i];
  for (std::size_t j = 0; j < y.tau.size(); ++j) y.tau[j] += a * x.tau[j];
}

class Solver {
 public:
  Solver(const Objective& obj, const SolverConfig& cfg, const GroundTruth* truth,
         const std::function<void(const IterationRecord&)>& observer)
      : obj_(obj), cfg_(cfg), truth_(truth), observer_(observer) {
    const GridSpec& s = obj.spec();
    scale_ = cfg.translation_scale_nm > 0.0 ? cfg.translation_scale_nm : s.extent_nm;
    // Frozen translations round-trip exactly.
    if (cfg.freeze_translations) scale_ = 1.0;
    bound_ = cfg.translation_bound_nm > 0.0 ? cfg.translation_bound_nm : 0.5 * s.extent_nm;
  }

  SolverResult run(ComplexField psi0, std::vector<Vec2> t0) {
    if (t0.size() != obj_.size()) throw ConfigError("minimize: one initial translation per image required");
    psi0 = apply_mask(std::move(psi0), obj_.aperture());
    t0[0] = {};
    for (auto& t : t0) t = project(t);

    Packed x{std::move(psi0), to_tau(t0)};
    Evaluation ev = obj_.evaluate(x.psi, to_t(x.tau));
    Packed g = gradient(ev);
    double gg = dot(g, g);
    Packed d = scaled(g, -1.0);
    bool steepest = true;
    double trial = cfg_.armijo_initial_step;
    log(0, ev, 0.0, g, x, false);

    SolverResult result;
    result.reason = StopReason::MaxIterations;
    int since_restart = 0;
    bool failed_once = false;
    for (int k = 1; k <= cfg_.max_iters; ++k) {
      if (gg == 0.0) {
        result.reason = StopReason::Stationary;
        break;
      }
      bool restarted = false;
      double gd = dot(g, d);
      if (!(gd < 0.0)) {
        d = scaled(g, -1.0);
        gd = -gg;
        steepest = true;
        restarted = true;
        since_restart = 0;
      }

      const double e0 = ev.energy.total;
      double s = trial;
      if (cfg_.exact_line_search) {
        if (const double exact = exact_step(x, d); exact > 0.0) s = exact;
      }
      bool accepted = false;
      bool unresolvable = false;
      bool moved = true;
      Packed xn;
      EnergyBreakdown en;
      for (int b = 0; b <= cfg_.armijo_max_backtracks; ++b) {
        if (s * std::abs(gd) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(e0)) {
          unresolvable = true;
          break;
        }
        xn = x;
        axpy(xn, s, d);
        for (auto& tau : xn.tau) tau = project_tau(tau);
        const double pred = dot(g, difference(xn, x));
        en = obj_.energy(xn.psi, to_t(xn.tau));
        if (en.total <= e0 + cfg_.armijo_sigma * std::min(pred, 0.0) && en.total <= e0) {
          accepted = true;
          moved = pred != 0.0 || en.total != e0;
          break;
        }
        s *= cfg_.armijo_backtrack;
      }

      if (!accepted) {
        if (!steepest) {
          if (unresolvable) {
            d = scaled(g, -1.0);
            steepest = true;
            since_restart = 0;
            --k;
            continue;
          }
          if (!failed_once) {
            warn("Armijo search failed along the conjugate direction; restarting with steepest descent");
            failed_once = true;
            d = scaled(g, -1.0);
            steepest = true;
            since_restart = 0;
            --k;
            continue;
          }
        }
        if (unresolvable) {
          result.reason = StopReason::Stationary;
        } else {
          warn("Armijo search failed after " + std::to_string(cfg_.armijo_max_backtracks) + " backtracks");
          result.reason = StopReason::LineSearchFailure;
        }
        break;
      }
      failed_once = false;
      if (!moved) {
        result.reason = StopReason::BoundStall;
        break;
      }

      x = std::move(xn);
      ev = obj_.evaluate(x.psi, to_t(x.tau));
      const double decrease = e0 - ev.energy.total;
      Packed gn = gradient(ev);
      const double ggn = dot(gn, gn);
      ++since_restart;
      double beta = gg > 0.0 ? ggn / gg : 0.0;
      if (since_restart >= cfg_.restart_period) {
        beta = 0.0;
        since_restart = 0;
        restarted = true;
      }
      Packed dn = scaled(gn, -1.0);
      axpy(dn, beta, d);
      d = std::move(dn);
      steepest = beta == 0.0;
      g = std::move(gn);
      gg = ggn;
      trial = s / cfg_.armijo_backtrack;
      log(k, ev, s, g, x, restarted);

      if (decrease < cfg_.epsilon_stop) {
        result.reason = StopReason::EnergyStalled;
        break;
      }
    }
    result.psi = std::move(x.psi);
    result.translations_nm = to_t(x.tau);
    result.log = std::move(log_);
    return result;
  }

 private:
  std::vector<Vec2> to_tau(const std::vector<Vec2>& t) const {
    std::vector<Vec2> tau(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) tau[j] = t[j] * (1.0 / scale_);
    return tau;
  }
  std::vector<Vec2> to_t(const std::vector<Vec2>& tau) const {
    std::vector<Vec2> t(tau.size());
    for (std::size_t j = 0; j < tau.size(); ++j) t[j] = tau[j] * scale_;
    return t;
  }
  Vec2 project(Vec2 t) const {
    const double r = norm(t);
    return r > bound_ ? t * (bound_ / r) : t;
  }
  // Minimizer of the data quartic plus the quadratic regularizer along d.
  double exact_step(const Packed& x, const Packed& d) const {
    const std::vector<Vec2> t = to_t(x.tau);
    std::array<double, 5> c = obj_.line_coefficients(x.psi, d.psi, t);
    const RegularizerSpec& reg = obj_.regularizer();
    if (reg.alpha != 0.0) {
      ComplexField base = x.psi;
      if (reg.psi_m) base -= *reg.psi_m;
      c[0] += reg.alpha * l2_norm_sq(base);
      c[1] += 2.0 * reg.alpha * inner_product(base, d.psi).real();
      c[2] += reg.alpha * l2_norm_sq(d.psi);
    }
    return quartic_argmin(c);
  }

  Vec2 project_tau(Vec2 tau) const { return project(tau * scale_) * (1.0 / scale_); }

  Packed gradient(const Evaluation& ev) const {
    Packed g{ev.grad_wave, std::vector<Vec2>(ev.grad_translations.size())};
    if (!cfg_.freeze_translations)
      for (std::size_t j = 1; j < g.tau.size(); ++j) g.tau[j] = ev.grad_translations[j] * scale_;
    return g;
  }

  static Packed difference(const Packed& a, const Packed& b) {
    Packed d = a;
    d.psi -= b.psi;
    for (std::size_t j = 0; j < d.tau.size(); ++j) d.tau[j] -= b.tau[j];
    return d;
  }

  void log(int k, const Evaluation& ev, double step, const Packed& g, const Packed& x, bool restarted) {
    IterationRecord rec;
    rec.iteration = k;
    rec.energy = ev.energy;
    rec.step = step;
    rec.grad_norm_wave = l2_norm(g.psi);
    double gt = 0.0;
    for (std::size_t j = 1; j < g.tau.size(); ++j) gt += norm_sq(g.tau[j]);
    rec.grad_norm_trans = std::sqrt(gt) / scale_;
    rec.restarted = restarted;
    if (truth_) {
      const double h = obj_.spec().pixel_size();
      const auto t = to_t(x.tau);
      double sup = 0.0, sum = 0.0;
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double e = norm(t[j] - truth_->translations_nm[j]) / h;
        sup = std::max(sup, e);
        sum += e * e;
      }
      rec.trans_err_sup_px = sup;
      rec.trans_err_euc_px = std::sqrt(sum);
      const WaveError we = wave_error(x.psi, truth_->psi, 2.0 * obj_.params().aperture_radius());
      rec.wave_err_sup = we.sup;
      rec.wave_err_euc = we.euc;
    }
    if (observer_) observer_(rec);
    log_.push_back(std::move(rec));
  }

  const Objective& obj_;
  const SolverConfig& cfg_;
  const GroundTruth* truth_;
  const std::function<void(const IterationRecord&)>& observer_;
  double scale_ = 1.0;
  double bound_ = 1.0;
  std::vector<IterationRecord> log_;
};

std::string csv_number(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

SolverResult minimize(const Objective& objective, ComplexField psi0, std::vector<Vec2> t0,
                      const SolverConfig& cfg, const GroundTruth* truth,
                      const std::function<void(const IterationRecord&)>& observer) {
  cfg.validate();
  if (truth && (truth->translations_nm.size() != objective.size() || truth->psi.spec() != objective.spec()))
    throw ConfigError("minimize: ground truth does not match the series");
  Solver solver(objective, cfg, truth, observer);
  return solver.run(std::move(psi0), std::move(t0));
}

void write_iteration_csv(std::ostream& out, const std::vector<IterationRecord>& log) {
  out << "iteration,total_energy,data_term,regularizer,step,grad_norm_wave,grad_norm_trans,"
         "trans_err_sup_px,trans_err_euc_px,wave_err_sup,wave_err_euc\n";
  for (const auto& r : log) {
    out << r.iteration << ',' << format_double(r.energy.total) << ',' << format_double(r.energy.data_term)
        << ',' << format_double(r.energy.regularizer) << ',' << format_double(r.step) << ','
        << format_double(r.grad_norm_wave) << ',' << format_double(r.grad_norm_trans) << ','
        << csv_number(r.trans_err_sup_px) << ',' << csv_number(r.trans_err_euc_px) << ','
        << csv_number(r.wave_err_sup) << ',' << csv_number(r.wave_err_euc) << '\n';
  }
}

void write_iteration_csv(const std::filesystem::path& path, const std::vector<IterationRecord>& log) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_iteration_csv(out, log);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ewr
