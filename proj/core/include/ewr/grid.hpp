#pragma once

#include "ewr/vec2.hpp"

#include <cstddef>
#include <string_view>

namespace ewr {

/// Which domain a sampled field lives in.
enum class Space { Real, Fourier };

std::string_view to_string(Space s);
Space space_from_string(std::string_view s);

/// Square periodic sampling grid with physical extent.
///
/// Storage is row-major with rows indexing y and columns indexing x. Both
/// axes use the FFT ("wrap-around") order: storage index k holds the signed
/// lattice index k for k < n/2 and k - n otherwise, so the lattice is
/// centered on {-n/2, ..., n/2 - 1}. Real-space sample k sits at
/// x = signed(k) * pixel_size, Fourier-space sample k at v = signed(k) / extent.
struct GridSpec {
  std::size_t n = 0;
  double extent_nm = 0.0;

  double pixel_size() const { return extent_nm / static_cast<double>(n); }
  double freq_step() const { return 1.0 / extent_nm; }
  double nyquist() const { return 0.5 / pixel_size(); }
  std::size_t size() const { return n * n; }

  /// Throws std::invalid_argument unless n is even and >= 2 and extent > 0.
  void validate() const;

  int signed_index(std::size_t k) const {
    return k < n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
  }
  /// Storage index for a signed lattice index, taken modulo n.
  std::size_t wrap(long long s) const {
    const long long m = static_cast<long long>(n);
    return static_cast<std::size_t>(((s % m) + m) % m);
  }

  Vec2 position(std::size_t row, std::size_t col) const {
    return {signed_index(col) * pixel_size(), signed_index(row) * pixel_size()};
  }
  Vec2 frequency(std::size_t row, std::size_t col) const {
    return {signed_index(col) * freq_step(), signed_index(row) * freq_step()};
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

}  // namespace ewr
