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

#include "svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace clab {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-14;
constexpr double kTinySigmaRel = 1e-12;

// Cyclic Jacobi on a symmetric matrix g; accumulates rotations into v.
// Returns the residual max off-diagonal magnitude.
double jacobi_diagonalize(Matrix& g, Matrix& v) {
  const std::size_t n = g.rows();
  if (n <= 1) return 0.0;

  const double scale = frobenius_norm(g);
  const double tol = kOffDiagTol * scale;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double max_off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = g(p, q);
        const double a = std::fabs(apq);
        if (a > max_off) max_off = a;
        if (a <= tol) continue;

        const double app = g(p, p);
        const double aqq = g(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double gkp = g(k, p);
          const double gkq = g(k, q);
          g(k, p) = c * gkp - s * gkq;
          g(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double gpk = g(p, k);
          const double gqk = g(q, k);
          g(p, k) = c * gpk - s * gqk;
          g(q, k) = s * gpk + c * gqk;
        }
        for (std::size_t k = 0; k < v.rows(); ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (max_off <= tol) return max_off;
  }

  double residual = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      residual = std::max(residual, std::fabs(g(p, q)));
    }
  }
  if (residual > tol) {
    throw numeric_error("jacobi eigensolver did not converge in " +
                        std::to_string(kMaxSweeps) +
                        " sweeps; residual off-diagonal " +
                        std::to_string(residual));
  }
  return residual;
}

// Subtract projections of w onto the first k columns of u (two passes),
// normalize. Returns false when w is numerically inside the span already.
bool orthonormalize_against(std::vector<double>& w, const Matrix& u,
                            std::size_t k) {
  const std::size_t rows = u.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < rows; ++r) dot += w[r] * u(r, j);
      for (std::size_t r = 0; r < rows; ++r) w[r] -= dot * u(r, j);
    }
  }
  double nrm = 0.0;
  for (double x : w) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (nrm < 1e-6) return false;
  for (double& x : w) x /= nrm;
  return true;
}

SvdResult svd_tall(const Matrix& e) {
  const std::size_t rows = e.rows();
  const std::size_t n = e.cols();

  // Gram matrix E^T E, accumulated left-to-right over rows.
  Matrix g(n, n);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* er = e.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = er[i];
      if (ei == 0.0) continue;
      for (std::size_t j = i; j < n; ++j) g(i, j) += ei * er[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }

  Matrix v = Matrix::identity(n);
  jacobi_diagonalize(g, v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g(a, a) > g(b, b);
  });

  SvdResult out;
  out.sigma.resize(n);
  out.v = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.sigma[k] = std::sqrt(std::max(g(src, src), 0.0));
    for (std::size_t r = 0; r < n; ++r) out.v(r, k) = v(r, src);
  }

  const double sigma_max = out.sigma.empty() ? 0.0 : out.sigma[0];
  out.u = Matrix(rows, n);
  std::vector<double> w(rows);
  for (std::size_t k = 0; k < n; ++k) {
    bool placed = false;
    if (sigma_max > 0.0 && out.sigma[k] > kTinySigmaRel * sigma_max) {
      for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        const double* er = e.row(r);
        for (std::size_t c = 0; c < n; ++c) acc += er[c] * out.v(c, k);
        w[r] = acc / out.sigma[k];
      }
      placed = orthonormalize_against(w, out.u, k);
    }
    if (!placed) {
      // Complete against canonical basis vectors in index order.
      for (std::size_t axis = 0; axis < rows && !placed; ++axis) {
        std::fill(w.begin(), w.end(), 0.0);
        w[axis] = 1.0;
        placed = orthonormalize_against(w, out.u, k);
      }
      if (!placed) {
        throw numeric_error("svd: failed to complete an orthonormal basis");
      }
    }
    for (std::size_t r = 0; r < rows; ++r) out.u(r, k) = w[r];
  }
  return out;
}

}  // namespace

SvdResult svd(const Matrix& e) {
  if (e.rows() == 0 || e.cols() == 0) {
    throw contract_error("svd requires at least one row and one column");
  }
  if (e.cols() > e.rows()) {
    SvdResult t = svd_tall(e.transposed());
    return SvdResult{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  return svd_tall(e);
}

std::vector<double> principal_angle_cosines(const Matrix& u1, const Matrix& u2) {
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols()) {
    throw contract_error("principal_angle_cosines: bases must share shape");
  }
  if (u1.cols() == 0) return {};

  auto check_orthonormal = [](const Matrix& u, const char* which) {
    const std::size_t k = u.cols();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        double dot = 0.0;
        for (std::size_t r = 0; r < u.rows(); ++r) dot += u(r, i) * u(r, j);
        const double want = (i == j) ? 1.0 : 0.0;
        if (std::fabs(dot - want) > 1e-6) {
          throw contract_error(std::string("principal_angle_cosines: ") + which +
                               " does not have orthonormal columns");
        }
      }
    }
  };
  check_orthonormal(u1, "u1");
  check_orthonormal(u2, "u2");

  const Matrix m = matmul(u1.transposed(), u2);
  std::vector<double> cos = svd(m).sigma;
  for (double& c : cos) {
    if (c > 1.0 + 1e-9) {
      throw numeric_error("principal angle cosine exceeds 1: " + std::to_string(c));
    }
    c = std::min(std::max(c, 0.0), 1.0);
  }
  return cos;
}

}  // namespace clab
