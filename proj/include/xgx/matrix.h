/*
 * Copyright 2026 The xgx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XGX_MATRIX_H_
#define XGX_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace xgx {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  std::span<double> row(size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  double& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  double operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  // Appends a row; the width must match cols() unless the matrix is empty
  // and has no columns yet.
  void AppendRow(std::span<const double> values);

  // Copies the listed rows, in order, into a new matrix.
  Matrix SelectRows(std::span<const size_t> indices) const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace xgx

#endif  // XGX_MATRIX_H_
