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

#include "matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "io_util.hpp"

namespace clab {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw shape_error("matrix data length " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(rows_) + "x" +
                      std::to_string(cols_));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::fill(double v) {
  for (double& x : data_) x = v;
}

bool Matrix::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw shape_error("matmul shape mismatch: " + std::to_string(a.rows()) +
                      "x" + std::to_string(a.cols()) + " * " +
                      std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double* oi = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) oi[j] += aik * bk[j];
    }
  }
  return out;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  const double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw shape_error("hcat: row counts differ");
  }
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

Matrix block(const Matrix& a, std::size_t r0, std::size_t c0,
             std::size_t rows, std::size_t cols) {
  if (r0 + rows > a.rows() || c0 + cols > a.cols()) {
    throw shape_error("block out of range");
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = a(r0 + r, c0 + c);
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw shape_error("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::fabs(a.data()[i] - b.data()[i]);
    if (d > m) m = d;
  }
  return m;
}

std::string matrix_to_text(const Matrix& m) {
  std::string out;
  out.reserve(m.size() * 24 + 32);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%zu %zu\n", m.rows(), m.cols());
  out += buf;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      if (c) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols)) {
    throw data_error(origin + ": missing matrix header 'rows cols'");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double v;
      if (!(in >> v)) {
        throw data_error(origin + ": truncated matrix body at row " +
                         std::to_string(r));
      }
      if (!std::isfinite(v)) {
        throw data_error(origin + ": non-finite entry at (" +
                         std::to_string(r) + "," + std::to_string(c) + ")");
      }
      m(r, c) = v;
    }
  }
  return m;
}

void write_matrix_text(const std::string& path, const Matrix& m) {
  atomic_write_text(path, matrix_to_text(m));
}

Matrix read_matrix_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open matrix file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return matrix_from_text(ss.str(), path);
}

}  // namespace clab
