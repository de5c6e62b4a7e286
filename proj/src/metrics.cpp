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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"
#include "rng.hpp"
#include "svd.hpp"

namespace clab {

double information_abundance(const Matrix& e) {
  const SvdResult s = svd(e);
  const double smax = s.sigma.empty() ? 0.0 : s.sigma[0];
  if (smax <= 0.0) {
    throw numeric_error("information_abundance: all-zero matrix");
  }
  double sum = 0.0;
  for (double x : s.sigma) sum += x;
  return sum / smax;
}

double normalized_ia(const Matrix& e, IaNormalization mode, int r_samples,
                     std::uint64_t seed) {
  const double ia = information_abundance(e);
  if (mode == IaNormalization::PerSize) {
    return ia / static_cast<double>(e.cols());
  }
  if (r_samples < 1) {
    throw contract_error("normalized_ia: r_samples must be >= 1");
  }
  double acc = 0.0;
  for (int r = 0; r < r_samples; ++r) {
    Rng rng(derive_seed(seed, "normalized-ia", static_cast<std::uint64_t>(r)));
    Matrix g(e.rows(), e.cols());
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
    acc += information_abundance(g);
  }
  return ia / (acc / r_samples);
}

double diversity(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw shape_error("diversity: embedding sets must share shape");
  }
  const SvdResult sa = svd(a);
  const SvdResult sb = svd(b);
  if (sa.sigma.empty() || sa.sigma[0] <= 0.0 || sb.sigma[0] <= 0.0) {
    throw numeric_error("diversity: all-zero embedding set");
  }
  const std::vector<double> cos = principal_angle_cosines(sa.u, sb.u);
  double l1 = 0.0;
  for (double c : cos) l1 += c;
  return 1.0 - l1 / static_cast<double>(cos.size());
}

namespace {

std::vector<int> order_by_ascending_ia(const std::vector<double>& raw_ia) {
  std::vector<int> order(raw_ia.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return raw_ia[a] < raw_ia[b]; });
  return order;
}

}  // namespace

IaGrid sub_embedding_ia_grid(const std::vector<Matrix>& embeddings,
                             const PairMap& projections) {
  const int n = static_cast<int>(embeddings.size());
  IaGrid grid;
  grid.n_fields = n;
  grid.values = Matrix(n, n);

  std::vector<double> raw(n);
  for (int i = 0; i < n; ++i) raw[i] = information_abundance(embeddings[i]);
  grid.field_order = order_by_ascending_ia(raw);

  for (int i = 0; i < n; ++i) {
    const std::size_t k = embeddings[i].cols();
    for (int j = 0; j < n; ++j) {
      auto it = projections.find({i, j});
      if (it == projections.end()) {
        throw contract_error("sub_embedding_ia_grid: missing projection for pair (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
      }
      const Matrix& w = it->second;
      if (w.rows() != k || w.cols() != k) {
        throw shape_error("sub_embedding_ia_grid: projection (" + std::to_string(i) +
                          "," + std::to_string(j) + ") is not K x K");
      }
      grid.values(i, j) = information_abundance(matmul(embeddings[i], w.transposed()));
    }
  }
  return grid;
}

IaGrid ia_grid_from_sub_embeddings(const std::vector<Matrix>& embeddings,
                                   const std::vector<std::vector<Matrix>>& subs) {
  const int n = static_cast<int>(embeddings.size());
  IaGrid grid;
  grid.n_fields = n;
  grid.values = Matrix(n, n);

  std::vector<double> raw(n);
  for (int i = 0; i < n; ++i) raw[i] = information_abundance(embeddings[i]);
  grid.field_order = order_by_ascending_ia(raw);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Matrix& s = subs[i][j];
      grid.values(i, j) = (s.size() == 0) ? 0.0 : information_abundance(s);
    }
  }
  return grid;
}

GridSummaries ia_grid_summaries(const IaGrid& grid, bool include_diagonal) {
  const int n = grid.n_fields;
  if (n < 3) {
    throw metric_error("ia_grid_summaries: need at least 3 fields for correlations");
  }
  GridSummaries out;
  out.row_sums.resize(n);
  out.col_sums.resize(n);
  for (int r = 0; r < n; ++r) {
    const int i = grid.field_order[r];
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!include_diagonal && j == i) continue;
      s += grid.values(i, j);
    }
    out.row_sums[r] = s;
  }
  for (int r = 0; r < n; ++r) {
    const int j = grid.field_order[r];
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!include_diagonal && i == j) continue;
      s += grid.values(i, j);
    }
    out.col_sums[r] = s;
  }
  std::vector<double> rank(n);
  for (int r = 0; r < n; ++r) rank[r] = r;
  out.row_corr = pearson(rank, out.row_sums);
  out.col_corr = pearson(rank, out.col_sums);
  return out;
}

GradSpectral gradient_spectral_decomposition(
    const std::vector<std::vector<int>>& batch,
    const std::vector<Matrix>& embeddings,
    const std::vector<double>& loss_grads, int target_field) {
  const int n = static_cast<int>(embeddings.size());
  if (batch.empty()) {
    throw contract_error("gradient_spectral_decomposition: empty batch");
  }
  if (loss_grads.size() != batch.size()) {
    throw contract_error("gradient_spectral_decomposition: loss_grads size mismatch");
  }
  if (target_field < 0 || target_field >= n) {
    throw contract_error("gradient_spectral_decomposition: bad target field");
  }
  const std::size_t k = embeddings[0].cols();
  for (const Matrix& e : embeddings) {
    if (e.cols() != k) {
      throw shape_error("gradient_spectral_decomposition: embedding widths differ");
    }
  }

  GradSpectral out;
  out.target_field = target_field;
  out.theta = Matrix(n, k);
  out.alpha = Matrix(n, k);
  out.source_sigma = Matrix(n, k);

  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (int i = 0; i < n; ++i) {
    const SvdResult s = svd(embeddings[i]);
    const std::size_t kk = s.sigma.size();
    for (std::size_t c = 0; c < std::min(kk, k); ++c) {
      out.source_sigma(i, c) = s.sigma[c];
    }
    if (i == target_field) continue;

    for (std::size_t c = 0; c < kk; ++c) {
      double a = 0.0;
      for (std::size_t b = 0; b < batch.size(); ++b) {
        const int row = batch[b][i];
        a += loss_grads[b] * s.u(static_cast<std::size_t>(row), c);
      }
      a *= inv_b;
      out.alpha(i, c) = a;
      const double w = a * s.sigma[c];
      for (std::size_t d = 0; d < k; ++d) out.theta(i, d) += w * s.v(d, c);
    }
  }
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) {
    throw contract_error("pearson: length mismatch or empty input");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

int numerical_rank(const Matrix& e) {
  const SvdResult s = svd(e);
  const double smax = s.sigma.empty() ? 0.0 : s.sigma[0];
  if (smax <= 0.0) return 0;
  int r = 0;
  for (double x : s.sigma) {
    if (x > 1e-8 * smax) ++r;
  }
  return r;
}

}  // namespace clab
