#pragma once

#include <stdexcept>
#include <string>

namespace gpdmm {

// Bad problem files, bad run parameters. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical or structural failures while building or running a solver
// (singular local systems, failed factorisations). CLI exit code 3.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gpdmm
