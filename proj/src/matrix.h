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

#ifndef DPREPLAY_MATRIX_H_
#define DPREPLAY_MATRIX_H_

#include <cstddef>
#include <string>
#include <vector>

namespace dpreplay {

class Rng;

// Dense row-major 2-D array of 64-bit floats; the universal numeric
// carrier of the library. All reductions use a fixed summation order
// (row-major, ascending inner index) so results are reproducible
// bit-for-bit.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  std::string shape_string() const;

  // Throws InternalError when any entry is NaN or infinite.
  void ensure_finite(const char* context) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Standard product; requires a.cols == b.rows. The (i, k, j) loop order
// accumulates each output entry over ascending k, matching the naive
// triple loop exactly.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// Draws rows x cols i.i.d. standard normals in row-major order.
Matrix gaussian(Rng& rng, std::size_t rows, std::size_t cols);

// out[r] += bias[0] for every row r; bias must be 1 x out.cols.
void add_bias_rows(Matrix& out, const Matrix& bias);

// Copies the given rows (in the given order) into a new matrix.
Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& rows);

// Stacks b below a; both must have the same column count.
Matrix vstack(const Matrix& a, const Matrix& b);

}  // namespace dpreplay

#endif  // DPREPLAY_MATRIX_H_
