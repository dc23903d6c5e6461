#include "ewr/series_io.hpp"

#include "ewr/errors.hpp"
#include "ewr/field_io.hpp"
#include "ewr/kv_file.hpp"

#include <chrono>
#include <cstdio>

namespace ewr {

namespace fs = std::filesystem;

std::string image_stem(std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "image_%03zu", index);
  return name;
}

void write_series(const fs::path& dir, const FocusSeries& series, bool deterministic) {
  series.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  KeyValueFile m;
  std::vector<double> tx, ty;
  for (const auto& t : series.translations_nm) {
    tx.push_back(t.x);
    ty.push_back(t.y);
  }
  const long long created =
      deterministic ? 0
                    : std::chrono::duration_cast<std::chrono::seconds>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count();
  m.set("series.count", static_cast<long long>(series.size()));
  m.set("series.foci_nm", series.foci_nm);
  m.set("series.translations_x_nm", tx);
  m.set("series.translations_y_nm", ty);
  m.set("series.n_focal", static_cast<long long>(series.n_focal));
  m.set("series.created", created);
  m.set("grid.n", static_cast<long long>(series.spec.n));
  m.set("grid.extent_nm", series.spec.extent_nm);
  m.set("optics.lambda_nm", series.params.lambda_nm);
  m.set("optics.cs_nm", series.params.cs_nm);
  m.set("optics.alpha_max_rad", series.params.alpha_max_rad);
  m.set("optics.delta_nm", series.params.delta_nm);
  m.set("optics.alpha_conv_rad", series.params.alpha_conv_rad);
  for (std::size_t j = 0; j < series.size(); ++j) write_field(dir / image_stem(j), series.images[j]);
  m.save(dir / "manifest.txt");
}

FocusSeries read_series(const fs::path& dir) {
  FocusSeries s;
  try {
    const auto m = KeyValueFile::load(dir / "manifest.txt");
    const long long count = m.get_int("series.count");
    if (count < 1) throw ConfigError("series.count must be >= 1");
    s.spec = GridSpec{static_cast<std::size_t>(m.get_int("grid.n")), m.get_double("grid.extent_nm")};
    s.params.lambda_nm = m.get_double("optics.lambda_nm");
    s.params.cs_nm = m.get_double("optics.cs_nm");
    s.params.alpha_max_rad = m.get_double("optics.alpha_max_rad");
    s.params.delta_nm = m.get_double("optics.delta_nm");
    s.params.alpha_conv_rad = m.get_double("optics.alpha_conv_rad");
    s.n_focal = static_cast<int>(m.get_int("series.n_focal"));
    s.foci_nm = m.get_doubles("series.foci_nm");
    const auto tx = m.get_doubles("series.translations_x_nm");
    const auto ty = m.get_doubles("series.translations_y_nm");
    const auto n = static_cast<std::size_t>(count);
    if (s.foci_nm.size() != n || tx.size() != n || ty.size() != n)
      throw ConfigError("list lengths disagree with series.count");
    for (std::size_t j = 0; j < n; ++j) s.translations_nm.push_back({tx[j], ty[j]});
    for (std::size_t j = 0; j < n; ++j) s.images.push_back(read_real_field(dir / image_stem(j)));
    s.spec.validate();
    s.params.validate();
    s.validate();
  } catch (const ConfigError& e) {
    throw IoError(dir.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(dir.string() + ": " + e.what());
  }
  return s;
}

void write_truth_wave(const fs::path& dir, const ComplexField& psi) { write_field(dir / "truth_wave", psi); }

std::optional<ComplexField> read_truth_wave(const fs::path& dir) {
  if (!fs::exists(meta_path(dir / "truth_wave"))) return std::nullopt;
  return read_complex_field(dir / "truth_wave");
}

}  // namespace ewr
