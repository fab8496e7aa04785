#pragma once

#include <stdexcept>
#include <string>

namespace aa {

// Error taxonomy shared by the library and the CLI.  The CLI maps each class
// to a distinct process exit code (see tools/aaphase_main.cpp):
//   ConfigError  -> 2   bad config file, bad key, bad unit, bad CLI usage
//   NumericError -> 3   guard violation, degenerate overlap, non-unitary input
//   IoError      -> 4   unreadable/unwritable files
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the inter-atomic distance falls below the validity guard of the
// point-dipole interaction model.  Subclass of NumericError so generic
// handlers keep working; carries the time at which the violation occurred.
struct GeometryError : NumericError {
  GeometryError(const std::string& what, double t_us_)
      : NumericError(what), t_us(t_us_) {}
  double t_us;
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aa
