#pragma once

#include "ewr/objective.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace ewr {

struct SolverConfig {
  double alpha = 1e-5;
  double epsilon_stop = 1e-10;
  int max_iters = 1000;
  double armijo_sigma = 1e-4;
  double armijo_backtrack = 0.5;
  /// First trial step; later iterations start from the previous accepted
  /// step divided by armijo_backtrack.
  double armijo_initial_step = 1.0;
  int armijo_max_backtracks = 60;
  int restart_period = 50;
  /// Radius of the admissible translation ball; 0 means half the field of view.
  double translation_bound_nm = 0.0;
  /// Translations enter the packed CG vector as t / translation_scale_nm;
  /// 0 means the field extent.
  double translation_scale_nm = 0.0;
  bool freeze_translations = false;
  /// With frozen translations the energy along a direction is a quartic;
  /// start each line search at its exact minimizer.
  bool exact_line_search = false;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

enum class StopReason { EnergyStalled, Stationary, MaxIterations, BoundStall, LineSearchFailure };
std::string_view to_string(StopReason r);

struct IterationRecord {
  int iteration = 0;
  EnergyBreakdown energy;
  double step = 0.0;
  double grad_norm_wave = 0.0;
  double grad_norm_trans = 0.0;
  std::optional<double> trans_err_sup_px;
  std::optional<double> trans_err_euc_px;
  std::optional<double> wave_err_sup;
  std::optional<double> wave_err_euc;
  bool restarted = false;
};

struct GroundTruth {
  ComplexField psi;
  std::vector<Vec2> translations_nm;
};

struct SolverResult {
  ComplexField psi;
  std::vector<Vec2> translations_nm;
  std::vector<IterationRecord> log;
  StopReason reason = StopReason::MaxIterations;
};

/// Constant real-space wave sqrt(mean intensity), as a masked Fourier field.
/// Throws NumericalError for a negative mean.
ComplexField init_wave(const FocusSeries& series);
/// Accumulated peak positions of consecutive-image cross-correlations; the
/// first entry is (0, 0). With subpixel set the integer peak is refined by a
/// parabola through its neighbours.
std::vector<Vec2> init_translations(const FocusSeries& series, bool subpixel = true);

/// Fletcher-Reeves conjugate gradients with Armijo backtracking on the packed
/// vector (psi, t_2..t_N). The first translation is held at (0, 0).
/// The observer, if given, sees every record as it is appended.
SolverResult minimize(const Objective& objective, ComplexField psi0, std::vector<Vec2> t0,
                      const SolverConfig& cfg, const GroundTruth* truth = nullptr,
                      const std::function<void(const IterationRecord&)>& observer = {});

struct GaugeFit {
  double phase = 0.0;
  Vec2 shift_nm;
};

/// Phase c and shift s maximizing |<ref, est mu_{-s}>|, c its argument.
GaugeFit fit_gauge(const ComplexField& est, const ComplexField& ref);
/// est e^{-ic} mu_{-s}; identity for a zero reference.
ComplexField gauge_align(const ComplexField& est, const ComplexField& ref);

struct WaveError {
  /// Real-space sup of the difference over the real-space sup of ref.
  double sup = 0.0;
  /// Euclidean norm of the difference inside |v| < band over that of ref.
  double euc = 0.0;
};
/// Errors after gauge alignment.
WaveError wave_error(const ComplexField& est, const ComplexField& ref, double band_radius);

void write_iteration_csv(std::ostream& out, const std::vector<IterationRecord>& log);
void write_iteration_csv(const std::filesystem::path& path, const std::vector<IterationRecord>& log);

}  // namespace ewr
