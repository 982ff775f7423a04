// src/features.cc

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

#include "chenone/features.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "chenone/error.h"

namespace chenone {

namespace {

constexpr char kMagic[4] = {'C', 'F', 'E', 'A'};
constexpr uint32_t kVersion = 1;

void PutU32(std::ostream &os, uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 4);
}

uint32_t GetU32(std::istream &is) {
  std::array<unsigned char, 4> b;
  if (!is.read(reinterpret_cast<char *>(b.data()), 4))
    CHENONE_ERR(kIo) << "truncated feature header";
  return uint32_t(b[0]) | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16) |
         (uint32_t(b[3]) << 24);
}

}  // namespace

Matrix Matrix::FromRows(const std::vector<std::vector<double>> &rows) {
  int32_t cols = rows.empty() ? 0 : static_cast<int32_t>(rows[0].size());
  Matrix m(static_cast<int32_t>(rows.size()), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int32_t>(rows[r].size()) != cols)
      CHENONE_ERR(kDimMismatch) << "ragged rows";
    for (int32_t c = 0; c < cols; ++c) m(r, c) = static_cast<float>(rows[r][c]);
  }
  return m;
}

Matrix Matrix::RowRange(int32_t begin, int32_t end) const {
  CHENONE_ASSERT(0 <= begin && begin <= end && end <= rows_);
  Matrix m(end - begin, cols_);
  std::copy(data_.begin() + size_t(begin) * cols_, data_.begin() + size_t(end) * cols_,
            m.data_.begin());
  return m;
}

void Matrix::Append(const Matrix &other) {
  if (rows_ == 0 && data_.empty()) cols_ = other.cols_;
  if (other.rows_ == 0) return;
  if (other.cols_ != cols_)
    CHENONE_ERR(kDimMismatch) << "append " << other.cols_ << " columns to " << cols_;
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  rows_ += other.rows_;
}

void WriteFeatures(std::ostream &os, const Matrix &features) {
  os.write(kMagic, 4);
  PutU32(os, kVersion);
  PutU32(os, static_cast<uint32_t>(features.NumRows()));
  PutU32(os, static_cast<uint32_t>(features.NumCols()));
  for (float v : features.data()) PutU32(os, std::bit_cast<uint32_t>(v));
}

Matrix ReadFeatures(std::istream &is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    CHENONE_ERR(kIo) << "not a CFEA feature file";
  uint32_t version = GetU32(is);
  if (version != kVersion)
    CHENONE_ERR(kIo) << "unsupported CFEA version " << version;
  uint32_t frames = GetU32(is);
  uint32_t dim = GetU32(is);
  Matrix m(static_cast<int32_t>(frames), static_cast<int32_t>(dim));
  for (uint32_t r = 0; r < frames; ++r)
    for (uint32_t c = 0; c < dim; ++c) m(r, c) = std::bit_cast<float>(GetU32(is));
  return m;
}

void WriteFeaturesFile(const std::string &path, const Matrix &features) {
  std::ofstream os(path, std::ios::binary);
  if (!os) CHENONE_ERR(kIo) << "cannot write " << path;
  WriteFeatures(os, features);
}

Matrix ReadFeaturesFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open features " << path;
  return ReadFeatures(is);
}

}  // namespace chenone
