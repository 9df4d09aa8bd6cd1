#pragma once

#include <stdexcept>
#include <string>

namespace sgraphon {

/// Bad or inconsistent input data (malformed files, out-of-range ids, degenerate splits).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument combination.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant was violated (non-finite intensities, empty categorical mass).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgraphon
