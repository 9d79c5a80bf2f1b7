#pragma once

#include <stdexcept>
#include <string>

namespace tnnr {

// Dimension mismatch between tensor operands.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid parameter combination (preset params, solver config, mask geometry).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A spectral-domain edit broke the conjugate symmetry that keeps the
// inverse transform real.  Signals a bug upstream, not bad user input.
struct SpectralConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SVD failed to converge or a value left the finite range.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Objective blew up during a solve.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed tensor/mask file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tnnr
