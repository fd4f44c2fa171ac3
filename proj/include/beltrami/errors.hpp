// Copyright 2026 the beltrami-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bel {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid input: precondition violations, malformed configs.
struct ConfigError : Error {
  using Error::Error;
};

// Two fields/operators built on incompatible grids were combined.
struct GridMismatchError : ConfigError {
  using ConfigError::ConfigError;
};

// Iteration failed to reach the requested tolerance.
struct SolverError : Error {
  SolverError(const std::string& what, double residual_, int iterations_)
      : Error(what), residual(residual_), iterations(iterations_) {}
  double residual = 0.0;
  int iterations = 0;
};

// Numerical consistency check failed (adjoint mismatch, degenerate
// spectrum, vanishing integrating factor, ...).
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace bel
