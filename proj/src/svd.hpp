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

#include <vector>

#include "matrix.hpp"

namespace clab {

// Thin SVD E = U diag(sigma) V^T with k = min(rows, cols).
//   u: rows x k, orthonormal columns
//   sigma: non-increasing, non-negative
//   v: cols x k, orthonormal columns
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

// SVD via the cols x cols Gram matrix E^T E, diagonalized by cyclic Jacobi
// rotations (off-diagonal tolerance 1e-14 relative to the Gram scale, at most
// 100 sweeps). sigma_k = sqrt(max(lambda_k, 0)). U columns are recovered as
// E v_k / sigma_k when sigma_k > 1e-12 * sigma_max, otherwise completed by
// Gram-Schmidt against canonical basis vectors in index order. The wide case
// (cols > rows) is handled by transposition.
//
// Intended regime: cols <= 64 << rows (embedding tables). Throws
// numeric_error when Jacobi fails to converge, carrying the residual
// off-diagonal magnitude.
SvdResult svd(const Matrix& e);

// Cosines of the principal angles between the column spaces spanned by u1
// and u2: the singular values of u1^T u2, non-increasing, clamped to [0, 1].
// Inputs must have orthonormal columns (checked to 1e-6), equal row counts
// and equal column counts.
std::vector<double> principal_angle_cosines(const Matrix& u1, const Matrix& u2);

}  // namespace clab
