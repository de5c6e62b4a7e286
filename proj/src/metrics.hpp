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

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace clab {

// Collapse quantifications: information abundance and its normalized
// variants, embedding-set diversity from principal angles, per-field-pair
// sub-embedding IA grids with correlation summaries, and the gradient
// spectral decomposition diagnostic. All functions are pure.

// ||sigma||_1 / ||sigma||_inf. In [1, min(rows, cols)] for any nonzero
// matrix; an all-zero matrix is a degenerate input (it indicates a broken
// run) and raises numeric_error.
double information_abundance(const Matrix& e);

enum class IaNormalization { PerSize, PerRandom };

// PerSize: IA(E) / cols. PerRandom: IA(E) divided by the mean IA of
// `r_samples` standard-normal matrices of identical shape (seeded).
double normalized_ia(const Matrix& e, IaNormalization mode, int r_samples = 16,
                     std::uint64_t seed = 0x1a5eedULL);

// 1 - mean principal-angle cosine between the left singular bases of two
// same-shaped nonzero matrices. 0 for identical column spaces, 1 for
// mutually orthogonal ones.
double diversity(const Matrix& a, const Matrix& b);

// Map keyed by ordered field pair (i, j) including the diagonal (i, i).
using PairMap = std::map<std::pair<int, int>, Matrix>;

struct IaGrid {
  int n_fields = 0;
  Matrix values;                 // values(i, j) = IA(E_i W_{i->j}^T), raw field indices
  std::vector<int> field_order;  // permutation sorting fields by ascending IA(E_i)
};

// Requires a K x K projection for every ordered pair (i, j), diagonal
// included; raises contract_error when one is missing.
IaGrid sub_embedding_ia_grid(const std::vector<Matrix>& embeddings,
                             const PairMap& projections);

// Same grid shape, sub-embeddings supplied directly (e.g. FFM column
// slices). subs[i][j] may be empty off the supported pairs; empty cells get
// value 0 and are skipped by summaries only when the whole row/col is empty.
IaGrid ia_grid_from_sub_embeddings(const std::vector<Matrix>& embeddings,
                                   const std::vector<std::vector<Matrix>>& subs);

struct GridSummaries {
  std::vector<double> row_sums;  // in field_order
  std::vector<double> col_sums;  // in field_order
  double row_corr = 0.0;         // Pearson of rank index vs row_sums
  double col_corr = 0.0;
};

// Pearson correlations are taken against the rank index 0..N-1 after
// sorting by raw per-field IA; defined as 0 when a sum vector has zero
// variance. Raises metric_error when n_fields < 3.
GridSummaries ia_grid_summaries(const IaGrid& grid, bool include_diagonal = true);

// Gradient of an FM-style batch loss with respect to the target field's
// embedding vector, decomposed per interacting field along the fixed
// embeddings' singular spectra.
struct GradSpectral {
  int target_field = 0;
  Matrix theta;         // n_fields x K; row i = theta_i, target row zero
  Matrix alpha;         // n_fields x K; target row zero
  Matrix source_sigma;  // n_fields x K singular values of each embedding
};

// batch[b] holds one category index per field; loss_grads[b] is the
// upstream dl/dh for sample b, supplied by the training engine.
GradSpectral gradient_spectral_decomposition(
    const std::vector<std::vector<int>>& batch,
    const std::vector<Matrix>& embeddings,
    const std::vector<double>& loss_grads, int target_field = 0);

// Pearson correlation; 0 when either variance vanishes.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Numerical rank: count of sigma > 1e-8 * sigma_max.
int numerical_rank(const Matrix& e);

}  // namespace clab
