#pragma once

#include <stdexcept>
#include <string>

namespace chronolens {

// Bad input files or data contents (missing file, malformed rows, NaN, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// MCMC convergence diagnostics outside the accepted range.
class FitDiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chronolens
