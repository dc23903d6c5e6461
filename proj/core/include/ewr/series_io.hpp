#pragma once

#include "ewr/forward.hpp"

#include <filesystem>
#include <optional>

namespace ewr {

/// Series directory layout:
///   manifest.txt        [series] count, foci_nm, translations_x_nm,
///                       translations_y_nm, n_focal, created; [grid]; [optics]
///   image_NNN.meta/.bin one real-space field per image
///   truth_wave.meta/.bin optional Fourier-space ground-truth wave
/// With deterministic set, the created timestamp is written as 0.
void write_series(const std::filesystem::path& dir, const FocusSeries& series, bool deterministic);
/// Throws IoError for missing or inconsistent files.
FocusSeries read_series(const std::filesystem::path& dir);

void write_truth_wave(const std::filesystem::path& dir, const ComplexField& psi);
std::optional<ComplexField> read_truth_wave(const std::filesystem::path& dir);

/// "image_NNN".
std::string image_stem(std::size_t index);

}  // namespace ewr
