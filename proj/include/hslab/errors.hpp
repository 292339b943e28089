#pragma once

#include <stdexcept>

namespace hslab {

// exit code 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit code 3
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit code 4
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hslab
