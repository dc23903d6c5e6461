#pragma once

#include "ewr/field.hpp"

#include <filesystem>

namespace ewr {

/// Fields are stored as a pair of files sharing a stem: "<stem>.meta" holds
/// n, extent_nm, space_tag and dtype as key = value lines, "<stem>.bin" the
/// raw little-endian float64 payload (interleaved re,im for complex128).
/// A round trip reproduces every bit.
void write_field(const std::filesystem::path& stem, const ComplexField& f);
void write_field(const std::filesystem::path& stem, const RealField& f);
ComplexField read_complex_field(const std::filesystem::path& stem);
RealField read_real_field(const std::filesystem::path& stem);

std::filesystem::path meta_path(const std::filesystem::path& stem);
std::filesystem::path payload_path(const std::filesystem::path& stem);

}  // namespace ewr
