#pragma once

#include "ewr/objective.hpp"
#include "ewr/tcc_oracle.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace ewr {

/// Tabulated probe result. Each row holds one sweep value followed by the
/// measured quantities named in columns (columns[0] names the sweep value).
struct ProbeReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Scalars reported alongside the table (targets, bands, thresholds).
  std::vector<std::pair<std::string, double>> scalars;
  bool pass = false;
  std::string verdict_detail;

  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;
  void write_summary(std::ostream& out) const;
};

/// Sampling of the one-dimensional non-coercivity probe.
struct CoercivityGrid {
  double spacing = 1.0 / 32.0;
  double left = -4.0;
  /// The window [left, right_factor * max delta] is padded by this factor.
  int padding = 8;
  /// Refuse when the energy in the outer half of the padding exceeds this
  /// fraction of the total (periodization of the sinc tails).
  double tail_threshold = 1e-6;
  /// Accepted band for ||(g * sinc)^2||_2, frozen from a pilot run.
  double band_lo = 0.75;
  double band_hi = 1.05;
};

/// For each delta: ||g_delta||^2 (trapezoid; equals ln delta), ||g_delta * sinc||_2
/// and ||(g_delta * sinc)^2||_2 with g_delta = x^{-1/2} on [1, delta] and the
/// ideal low-pass |xi| <= 1/2. PASS iff the filtered norm is strictly
/// increasing and the squared norm stays inside the band. Throws
/// std::invalid_argument for non-increasing deltas or deltas <= 1, and
/// NumericalError when the tail estimate exceeds the threshold.
ProbeReport coercivity_probe(const std::vector<double>& deltas, const CoercivityGrid& grid = {});

/// Two-dimensional smoke case on a 32^2 grid: product g_delta on [1, delta]^2
/// with a square low-pass; PASS iff ||f||^2 / ||f^2|| increases with delta.
ProbeReport coercivity_probe_2d(const std::vector<double>& deltas);

/// Production factorization: sup over in-aperture radius pairs of
/// |kernel_eval - tcc_ishizuka_rank1| per node count. The error depends on
/// the two radii only, so a dense radial grid (radial_samples per axis)
/// stands in for random pairs. PASS iff non-increasing up to slack.
ProbeReport factorization_sweep(double focus_nm, const OpticalParams& p, const std::vector<int>& node_counts,
                                int radial_samples = 400, double slack = 1e-12);

/// Riemann oracle against the Gauss-Hermite reference on a fixed random set
/// of in-aperture pairs. PASS iff the sup error is non-increasing in M.
ProbeReport oracle_sweep(double focus_nm, const OpticalParams& p, const CoherenceDensities& d,
                         const std::vector<int>& ms, int pairs, std::uint64_t seed);

/// Energy deviations under random global phases and random global
/// modulations (with every translation shifted alike). PASS iff the maximum
/// relative deviation is <= tolerance.
ProbeReport invariance_suite(const Objective& objective, const ComplexField& psi, const std::vector<Vec2>& t,
                             std::uint64_t seed, int count = 10, double tolerance = 1e-10);

/// C2 at psi = 0 along mollified deltas of decreasing width. PASS (i.e. the
/// functional is shown non-convex) iff every C2 < 0 and the narrowest lies
/// within rel_tol of l1_limit. An all-zero series reports the convex case.
ProbeReport convexity_sweep(const Objective& objective, const std::vector<double>& widths,
                            const std::vector<Vec2>& t, double rel_tol = 0.05);

/// Random aperture-masked Fourier-space wave (unit-scale real-space amplitude).
ComplexField random_wave(const GridSpec& spec, const OpticalParams& p, std::uint64_t seed);

}  // namespace ewr
