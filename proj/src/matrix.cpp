// Copyright 2026 The dpreplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matrix.h"

#include <cmath>

#include "errors.h"
#include "rng.h"

namespace dpreplay {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw UsageError("Matrix: data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_string());
  }
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void Matrix::ensure_finite(const char* context) const {
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw InternalError(std::string("non-finite value in ") + context);
    }
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw UsageError("matmul: incompatible shapes " + a.shape_string() + " and " +
                     b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  const std::size_t n = a.rows(), k_max = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* out_row = out.row(i);
    const double* a_row = a.row(i);
    for (std::size_t k = 0; k < k_max; ++k) {
      const double aik = a_row[k];
      const double* b_row = b.row(k);
      for (std::size_t j = 0; j < m; ++j) {
        out_row[j] += aik * b_row[j];
      }
    }
  }
  out.ensure_finite("matmul");
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = a(i, j);
    }
  }
  return out;
}

Matrix gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw UsageError("gaussian: rows and cols must be >= 1");
  }
  Matrix out(rows, cols);
  double* p = out.data();
  for (std::size_t i = 0; i < rows * cols; ++i) {
    p[i] = rng.next_gaussian();
  }
  return out;
}

void add_bias_rows(Matrix& out, const Matrix& bias) {
  if (bias.rows() != 1 || bias.cols() != out.cols()) {
    throw UsageError("add_bias_rows: bias " + bias.shape_string() +
                     " does not broadcast over " + out.shape_string());
  }
  const double* b = bias.row(0);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double* r = out.row(i);
    for (std::size_t j = 0; j < out.cols(); ++j) {
      r[j] += b[j];
    }
  }
}

Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= a.rows()) {
      throw UsageError("take_rows: index " + std::to_string(rows[i]) +
                       " out of range for " + a.shape_string());
    }
    const double* src = a.row(rows[i]);
    double* dst = out.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      dst[j] = src[j];
    }
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.cols() != b.cols()) {
    throw UsageError("vstack: column mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
  Matrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

}  // namespace dpreplay
