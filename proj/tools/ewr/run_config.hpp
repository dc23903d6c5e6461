#pragma once

#include "ewr/forward.hpp"
#include "ewr/kv_file.hpp"
#include "ewr/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace ewr::app {

struct ProbeSettings {
  std::vector<double> widths{10.0, 5.0, 2.5, 1.25, 0.625, 0.0};
  double convexity_rel_tol = 0.05;
  std::vector<double> deltas{10.0, 100.0, 1000.0};
  double focus_nm = 10.0;
  std::vector<double> node_counts{3.0, 7.0, 15.0};
  int radial_samples = 400;
  std::vector<double> oracle_ms{4.0, 6.0, 8.0};
  int oracle_pairs = 40;
  double oracle_sigma_u = 0.1;
  double oracle_sigma_f = 0.2;
  int invariance_count = 10;
  double invariance_tol = 1e-10;
};

/// Everything a command needs. Sections of the config file map onto the
/// groups below; every key is listed by RunConfig::keys().
struct RunConfig {
  OpticalParams optics;
  /// Reconstruction (and cropped image) grid.
  GridSpec grid{128, 0.4};
  /// Simulation grid is oversample * n samples over oversample * extent.
  int oversample = 2;
  int n_focal = 1;

  /// "perovskite", "plane" or "random".
  std::string wave_kind = "perovskite";
  double cell_nm = 0.4;

  double focus_start_nm = -10.0;
  double focus_step_nm = 1.5;
  int count = 12;
  /// Explicit foci override start/step when non-empty.
  std::vector<double> foci_nm;
  // 0.017 nm per step along the diagonal.
  Vec2 drift_step_nm{0.017 / std::numbers::sqrt2, 0.017 / std::numbers::sqrt2};
  double poisson_dose = 0.0;

  SolverConfig solver;

  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;
  bool deterministic = false;

  ProbeSettings probe;

  /// Throws ConfigError on unknown keys or unparsable values.
  void apply(const KeyValueFile& kv);
  /// "section.key=value".
  void apply_override(const std::string& assignment);
  /// Throws ConfigError on inconsistent or non-physical settings.
  void validate() const;
  KeyValueFile to_kv() const;

  std::vector<double> foci() const;
  std::vector<Vec2> drifts() const;
  GridSpec simulation_grid() const;

  static RunConfig load(const std::filesystem::path& path);
  static std::vector<std::string> keys();
};

}  // namespace ewr::app
