/* Copyright (c) 2026 collapse-lab authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <stdexcept>
#include <string>

namespace clab {

// Error taxonomy. The C API and the CLI map these onto the exit-code
// contract: config/usage/data problems -> 2, runtime numeric failures -> 3.

// Bad experiment configuration or command usage.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files (CSV, checkpoints, matrix text files).
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix dimension mismatch.
struct shape_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was violated by the caller.
struct contract_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-convergence, non-finite values.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API called in the wrong order (e.g. backward before forward).
struct state_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate metric input (e.g. single-class AUC).
struct metric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace clab
