#include "ewr/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ewr {

std::string_view to_string(Space s) { return s == Space::Real ? "real" : "fourier"; }

Space space_from_string(std::string_view s) {
  if (s == "real") return Space::Real;
  if (s == "fourier") return Space::Fourier;
  throw std::invalid_argument("unknown space tag '" + std::string(s) + "'");
}

void GridSpec::validate() const {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 2, got " + std::to_string(n));
  if (!(extent_nm > 0.0) || !std::isfinite(extent_nm))
    throw std::invalid_argument("grid extent must be positive and finite");
}

}  // namespace ewr
