#pragma once

#include <stdexcept>
#include <string>

namespace ewr {

/// Invalid configuration or inconsistent inputs detected before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system or format failure while reading/writing artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical contract was violated at run time (non-finite data, broken
/// symmetry, line-search breakdown).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ewr
