// include/chenone/features.h

// Copyright 2026  The chenone authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CHENONE_FEATURES_H_
#define CHENONE_FEATURES_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chenone {

/// Row-major frames x dim feature matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int32_t rows, int32_t cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {}
  static Matrix FromRows(const std::vector<std::vector<double>> &rows);

  int32_t NumRows() const { return rows_; }
  int32_t NumCols() const { return cols_; }
  std::span<const float> Row(int32_t r) const {
    return {data_.data() + size_t(r) * cols_, size_t(cols_)};
  }
  std::span<float> MutableRow(int32_t r) {
    return {data_.data() + size_t(r) * cols_, size_t(cols_)};
  }
  float &operator()(int32_t r, int32_t c) { return data_[size_t(r) * cols_ + c]; }
  float operator()(int32_t r, int32_t c) const { return data_[size_t(r) * cols_ + c]; }
  const std::vector<float> &data() const { return data_; }

  /// Rows [begin, end) as a new matrix.
  Matrix RowRange(int32_t begin, int32_t end) const;
  /// Appends rows; an empty matrix adopts `other`'s width.
  void Append(const Matrix &other);

  bool operator==(const Matrix &other) const = default;

 private:
  int32_t rows_ = 0;
  int32_t cols_ = 0;
  std::vector<float> data_;
};

/// CFEA binary format: magic "CFEA", u32 version (1), u32 frames, u32 dim,
/// then frames*dim little-endian float32, row-major.
void WriteFeatures(std::ostream &os, const Matrix &features);
Matrix ReadFeatures(std::istream &is);
void WriteFeaturesFile(const std::string &path, const Matrix &features);
Matrix ReadFeaturesFile(const std::string &path);

}  // namespace chenone

#endif  // CHENONE_FEATURES_H_
