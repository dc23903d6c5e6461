#include "ewr/field_io.hpp"

#include "ewr/errors.hpp"
#include "ewr/kv_file.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

namespace ewr {
namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

void write_doubles(const std::filesystem::path& path, const double* data, std::size_t count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      auto bits = std::bit_cast<std::uint64_t>(data[i]);
      unsigned char b[8];
      for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
      out.write(reinterpret_cast<const char*>(b), 8);
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void read_doubles(const std::filesystem::path& path, double* data, std::size_t count) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != count * sizeof(double))
    throw IoError(path.string() + ": payload has " + std::to_string(bytes) + " bytes, expected " +
                  std::to_string(count * sizeof(double)));
  in.seekg(0);
  std::vector<unsigned char> raw(bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("read failed for " + path.string());
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(raw[8 * i + k]) << (8 * k);
    data[i] = std::bit_cast<double>(bits);
  }
}

void write_meta(const std::filesystem::path& stem, const GridSpec& spec, Space space, const char* dtype) {
  KeyValueFile meta;
  meta.set("n", static_cast<long long>(spec.n));
  meta.set("extent_nm", spec.extent_nm);
  meta.set("space_tag", std::string(to_string(space)));
  meta.set("dtype", std::string(dtype));
  meta.save(meta_path(stem));
}

struct Meta {
  GridSpec spec;
  Space space;
  std::string dtype;
};

Meta read_meta(const std::filesystem::path& stem) {
  try {
    auto meta = KeyValueFile::load(meta_path(stem));
    const long long n = meta.get_int("n");
    if (n <= 0) throw ConfigError("n must be positive");
    Meta m{GridSpec{static_cast<std::size_t>(n), meta.get_double("extent_nm")},
           space_from_string(meta.get("space_tag")), meta.get("dtype")};
    m.spec.validate();
    return m;
  } catch (const ConfigError& e) {
    throw IoError(meta_path(stem).string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(meta_path(stem).string() + ": " + e.what());
  }
}

}  // namespace

std::filesystem::path meta_path(const std::filesystem::path& stem) { return with_suffix(stem, ".meta"); }
std::filesystem::path payload_path(const std::filesystem::path& stem) { return with_suffix(stem, ".bin"); }

void write_field(const std::filesystem::path& stem, const ComplexField& f) {
  write_meta(stem, f.spec(), f.space(), "complex128");
  write_doubles(payload_path(stem), reinterpret_cast<const double*>(f.values().data()), 2 * f.size());
}

void write_field(const std::filesystem::path& stem, const RealField& f) {
  write_meta(stem, f.spec(), Space::Real, "float64");
  write_doubles(payload_path(stem), f.values().data(), f.size());
}

ComplexField read_complex_field(const std::filesystem::path& stem) {
  const Meta m = read_meta(stem);
  if (m.dtype != "complex128") throw IoError(stem.string() + ": dtype " + m.dtype + ", expected complex128");
  std::vector<cplx> v(m.spec.size());
  read_doubles(payload_path(stem), reinterpret_cast<double*>(v.data()), 2 * v.size());
  try {
    return ComplexField(m.spec, m.space, std::move(v));
  } catch (const NumericalError& e) {
    throw IoError(stem.string() + ": " + e.what());
  }
}

RealField read_real_field(const std::filesystem::path& stem) {
  const Meta m = read_meta(stem);
  if (m.dtype != "float64") throw IoError(stem.string() + ": dtype " + m.dtype + ", expected float64");
  std::vector<double> v(m.spec.size());
  read_doubles(payload_path(stem), v.data(), v.size());
  try {
    return RealField(m.spec, std::move(v));
  } catch (const NumericalError& e) {
    throw IoError(stem.string() + ": " + e.what());
  }
}

}  // namespace ewr
