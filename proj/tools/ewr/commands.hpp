#pragma once

#include "run_config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace ewr::app {

enum ExitCode : int { kOk = 0, kConfigFailure = 2, kIoFailure = 3, kNumericalFailure = 4, kProbeFailure = 5 };

/// Simulates the configured series into cfg.output_dir together with the
/// ground-truth wave and the effective config.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);

/// Reconstructs the wave and translations of the series in series_dir.
/// Writes wave, wave_real, translations.csv, iterations.csv and result.txt.
int cmd_reconstruct(const RunConfig& cfg, const std::filesystem::path& series_dir, std::ostream& log);

/// name is convexity, invariance, coercivity or factorization. The first two
/// use series_dir when given and simulate the configured series otherwise.
int cmd_probe(const std::string& name, const RunConfig& cfg, const std::optional<std::filesystem::path>& series_dir,
              std::ostream& log);

/// Prints a series manifest with per-image statistics, or a field header.
int cmd_info(const std::filesystem::path& path, std::ostream& out);

/// Simulated series plus the truth wave on the reconstruction grid.
struct SimulatedSeries {
  FocusSeries series;
  ComplexField truth;
};
SimulatedSeries simulate_configured(const RunConfig& cfg);

}  // namespace ewr::app
