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

#include <cstddef>
#include <string>
#include <vector>

namespace clab {

// Dense double-precision matrix, row-major. The one numeric carrier used for
// embedding tables, weights, gradients and report payloads. All reductions
// over matrices in this project run in deterministic left-to-right order so
// repeated runs are bit-identical.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  bool same_shape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  void fill(double v);
  bool all_finite() const;
  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Standard product; throws shape_error on inner-dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);

// Column-wise concatenation [a, b]; equal row counts required.
Matrix hcat(const Matrix& a, const Matrix& b);

// Copy of the sub-block starting at (r0, c0).
Matrix block(const Matrix& a, std::size_t r0, std::size_t c0,
             std::size_t rows, std::size_t cols);

double max_abs_diff(const Matrix& a, const Matrix& b);

// Text format shared across modules: first line "rows cols", then `rows`
// lines of `cols` space-separated values at 17 significant digits.
std::string matrix_to_text(const Matrix& m);
Matrix matrix_from_text(const std::string& text, const std::string& origin);
void write_matrix_text(const std::string& path, const Matrix& m);
Matrix read_matrix_text(const std::string& path);

}  // namespace clab
