#include "commands.hpp"

#include "ewr/analysis.hpp"
#include "ewr/diagnostics.hpp"
#include "ewr/errors.hpp"
#include "ewr/field_io.hpp"
#include "ewr/objective.hpp"
#include "ewr/optimizer.hpp"
#include "ewr/series_io.hpp"
#include "ewr/spectral.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

namespace ewr::app {

namespace fs = std::filesystem;

namespace {

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".ewr_write_test";
  std::ofstream out(probe);
  if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  out.close();
  fs::remove(probe, ec);
}

ComplexField wave_on(const GridSpec& spec, const RunConfig& cfg) {
  if (cfg.wave_kind == "plane") {
    ComplexField psi(spec, Space::Fourier);
    psi[0] = spec.extent_nm * spec.extent_nm;
    return psi;
  }
  if (cfg.wave_kind == "random") return random_wave(spec, cfg.optics, cfg.seed);
  return make_synthetic_wave(spec, perovskite_wave(cfg.cell_nm), cfg.optics);
}

void write_translations(const fs::path& path, const std::vector<Vec2>& t, double pixel) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "image,x_nm,y_nm,x_px,y_px\n";
  for (std::size_t j = 0; j < t.size(); ++j)
    out << j << ',' << format_double(t[j].x) << ',' << format_double(t[j].y) << ',' << format_double(t[j].x / pixel)
        << ',' << format_double(t[j].y / pixel) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

void check_manifest(const FocusSeries& s, const RunConfig& cfg) {
  if (s.spec != cfg.grid)
    throw ConfigError("series grid (" + std::to_string(s.spec.n) + ", " + format_double(s.spec.extent_nm) +
                      " nm) does not match the config grid");
  if (s.params != cfg.optics) throw ConfigError("series optics do not match the config optics");
  if (s.n_focal != cfg.n_focal) throw ConfigError("series n_focal does not match grid.n_focal");
}

FocusSeries series_for_probe(const RunConfig& cfg, const std::optional<fs::path>& dir) {
  if (!dir) return simulate_configured(cfg).series;
  FocusSeries s = read_series(*dir);
  check_manifest(s, cfg);
  return s;
}

void emit(const ProbeReport& rep, const fs::path& dir, std::ostream& log) {
  rep.write_csv(dir / (rep.name + ".csv"));
  std::ofstream sum(dir / (rep.name + "_summary.txt"));
  rep.write_summary(sum);
  if (!sum) throw IoError("cannot write probe summary in " + dir.string());
  rep.write_summary(log);
}

std::vector<int> as_ints(const std::vector<double>& v) {
  std::vector<int> out;
  for (double x : v) out.push_back(static_cast<int>(x));
  return out;
}

}  // namespace

SimulatedSeries simulate_configured(const RunConfig& cfg) {
  cfg.validate();
  const ComplexField big = wave_on(cfg.simulation_grid(), cfg);
  SimulatedSeries out{simulate_series(big, cfg.grid, cfg.foci(), cfg.drifts(), cfg.optics, cfg.n_focal),
                      wave_on(cfg.grid, cfg)};
  if (cfg.poisson_dose > 0.0) add_poisson_noise(out.series, cfg.poisson_dose, cfg.seed);
  return out;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  prepare_dir(cfg.output_dir);
  const SimulatedSeries sim = simulate_configured(cfg);
  write_series(cfg.output_dir, sim.series, cfg.deterministic);
  write_truth_wave(cfg.output_dir, sim.truth);
  cfg.to_kv().save(cfg.output_dir / "config.cfg");
  log << "simulated " << sim.series.size() << " images of " << cfg.grid.n << "^2 over " << format_double(cfg.grid.extent_nm)
      << " nm into " << cfg.output_dir.string() << '\n';
  return kOk;
}

int cmd_reconstruct(const RunConfig& cfg, const fs::path& series_dir, std::ostream& log) {
  cfg.validate();
  const FocusSeries series = read_series(series_dir);
  check_manifest(series, cfg);
  prepare_dir(cfg.output_dir);
  if (cfg.solver.alpha == 0.0) warn("alpha = 0: the functional is not coercive and the iterates may drift");

  const Objective obj(series, RegularizerSpec{cfg.solver.alpha, std::nullopt});
  const ComplexField psi0 = init_wave(series);
  const std::vector<Vec2> t0 = init_translations(series);

  std::optional<GroundTruth> truth;
  if (auto wave = read_truth_wave(series_dir)) truth = GroundTruth{std::move(*wave), series.translations_nm};

  const double px = cfg.grid.pixel_size();
  const SolverResult res = minimize(obj, psi0, t0, cfg.solver, truth ? &*truth : nullptr, [&](const IterationRecord& r) {
    if (r.iteration % 10 != 0) return;
    log << "iter " << std::setw(4) << r.iteration << "  E " << std::scientific << std::setprecision(6)
        << r.energy.total << "  D " << r.energy.data_term << "  R " << r.energy.regularizer;
    if (r.trans_err_sup_px) log << "  terr " << std::fixed << std::setprecision(4) << *r.trans_err_sup_px << " px";
    log << std::defaultfloat << '\n';
  });

  write_field(cfg.output_dir / "wave", res.psi);
  write_field(cfg.output_dir / "wave_real", inverse_spectral_transform(res.psi));
  write_translations(cfg.output_dir / "translations.csv", res.translations_nm, px);
  write_iteration_csv(cfg.output_dir / "iterations.csv", res.log);
  cfg.to_kv().save(cfg.output_dir / "config.cfg");

  const IterationRecord& last = res.log.back();
  KeyValueFile result;
  result.set("result.stop_reason", std::string(to_string(res.reason)));
  result.set("result.iterations", static_cast<long long>(last.iteration));
  result.set("result.energy", last.energy.total);
  result.set("result.data_term", last.energy.data_term);
  result.set("result.regularizer", last.energy.regularizer);
  if (last.trans_err_sup_px) result.set("result.trans_err_sup_px", *last.trans_err_sup_px);
  if (last.wave_err_euc) result.set("result.wave_err_euc", *last.wave_err_euc);
  result.save(cfg.output_dir / "result.txt");

  log << "stopped: " << to_string(res.reason) << " after " << last.iteration << " iterations, energy "
      << format_double(last.energy.total) << '\n';
  return res.reason == StopReason::LineSearchFailure ? kNumericalFailure : kOk;
}

int cmd_probe(const std::string& name, const RunConfig& cfg, const std::optional<fs::path>& series_dir,
              std::ostream& log) {
  cfg.validate();
  if (name != "convexity" && name != "invariance" && name != "coercivity" && name != "factorization")
    throw ConfigError("unknown probe '" + name + "'");
  prepare_dir(cfg.output_dir);
  const auto& ps = cfg.probe;
  bool pass = false;

  if (name == "convexity") {
    const FocusSeries s = series_for_probe(cfg, series_dir);
    const Objective obj(s, RegularizerSpec{cfg.solver.alpha, std::nullopt});
    const ProbeReport rep = convexity_sweep(obj, ps.widths, s.translations_nm, ps.convexity_rel_tol);
    emit(rep, cfg.output_dir, log);
    pass = rep.pass;
  } else if (name == "invariance") {
    const FocusSeries s = series_for_probe(cfg, series_dir);
    const Objective obj(s, RegularizerSpec{cfg.solver.alpha, std::nullopt});
    const ComplexField psi = random_wave(s.spec, s.params, cfg.seed);
    const ProbeReport rep =
        invariance_suite(obj, psi, s.translations_nm, cfg.seed + 1, ps.invariance_count, ps.invariance_tol);
    emit(rep, cfg.output_dir, log);
    pass = rep.pass;
  } else if (name == "coercivity") {
    const ProbeReport rep = coercivity_probe(ps.deltas);
    emit(rep, cfg.output_dir, log);
    pass = rep.pass;
  } else {
    ProbeReport prod = factorization_sweep(ps.focus_nm, cfg.optics, as_ints(ps.node_counts), ps.radial_samples);
    ProbeReport oracle = oracle_sweep(ps.focus_nm, cfg.optics, CoherenceDensities{ps.oracle_sigma_u, ps.oracle_sigma_f},
                                      as_ints(ps.oracle_ms), ps.oracle_pairs, cfg.seed);
    prod.name = "factorization";
    oracle.name = "factorization_oracle";
    emit(prod, cfg.output_dir, log);
    emit(oracle, cfg.output_dir, log);
    pass = prod.pass && oracle.pass;
  }
  return pass ? kOk : kProbeFailure;
}

int cmd_info(const fs::path& path, std::ostream& out) {
  if (fs::is_directory(path)) {
    const fs::path manifest = path / "manifest.txt";
    if (!fs::exists(manifest)) throw IoError(path.string() + " has no manifest.txt");
    out << KeyValueFile::load(manifest).to_string();
    const FocusSeries s = read_series(path);
    out << "\nimage,focus_nm,min,max,mean\n";
    for (std::size_t j = 0; j < s.size(); ++j) {
      const auto& v = s.images[j].values();
      double sum = 0.0;
      for (double x : v) sum += x;
      out << j << ',' << format_double(s.foci_nm[j]) << ',' << format_double(*std::min_element(v.begin(), v.end()))
          << ',' << format_double(*std::max_element(v.begin(), v.end())) << ','
          << format_double(sum / static_cast<double>(v.size())) << '\n';
    }
    if (read_truth_wave(path)) out << "truth wave present\n";
    return kOk;
  }
  fs::path stem = path;
  if (stem.extension() == ".meta" || stem.extension() == ".bin") stem.replace_extension();
  const fs::path meta = meta_path(stem);
  if (!fs::exists(meta)) throw IoError("no series directory or field at " + path.string());
  out << KeyValueFile::load(meta).to_string();
  return kOk;
}

}  // namespace ewr::app
